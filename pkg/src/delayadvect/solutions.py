"""Exact solutions of the time-delay advection equation

    d/dt u(x, t) = -a d/dx u(x, t - tau),         t > tau,

and of its Caputo-fractional counterpart, with u = f(x) (or f(x) g(t)) on
0 <= t <= tau and u = 0 for t < 0.

All evaluators take scalar or array ``x``/``t`` (broadcast against each other)
and return a float for scalar input, otherwise an ndarray.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .delay import MAX_TERMS, dexp_scaled
from .errors import (
    DelayAdvectError,
    DomainError,
    GridError,
    QuadratureWarning,
    SeriesOverflowError,
    SpectralDiagnosticError,
    TermCountError,
)
from .initial import Gaussian, InitialCondition, TimeProfile
from .special import hermite_table


@dataclass(frozen=True)
class DelayParams:
    """Advection speed ``a``, delay ``tau`` and Caputo order ``alpha`` (1 = classical)."""

    a: float
    tau: float
    alpha: float = 1.0

    def __post_init__(self):
        for name in ("a", "tau", "alpha"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
        if self.a <= 0:
            raise DomainError(f"a must be > 0, got {self.a}")
        if self.tau <= 0:
            raise DomainError(f"tau must be > 0, got {self.tau}")
        if not 0 < self.alpha <= 1:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid of nx inclusive x samples by nt inclusive t samples."""

    x_min: float
    x_max: float
    nx: int
    t_min: float
    t_max: float
    nt: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.t_min < self.t_max):
            raise GridError("grid bounds must satisfy min < max")
        if self.nx < 2 or self.nt < 2:
            raise GridError("grid needs at least two samples per axis")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.nt)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nt, self.nx)


def _broadcast(x, t):
    x_arr = np.asarray(x, dtype=np.float64)
    t_arr = np.asarray(t, dtype=np.float64)
    scalar = x_arr.ndim == 0 and t_arr.ndim == 0
    xb, tb = np.broadcast_arrays(x_arr, t_arr)
    if not (np.all(np.isfinite(xb)) and np.all(np.isfinite(tb))):
        raise DomainError("x and t must be finite")
    return xb, tb, scalar


def _wrap(out, scalar):
    return float(out.reshape(())) if scalar else out


def _term_count(t, tau, max_terms):
    tmax = float(np.max(t)) if t.size else -1.0
    if tmax < 0:
        return -1
    n = int(math.floor(tmax / tau))
    if n > max_terms:
        raise TermCountError(f"floor(t/tau) = {n} exceeds the term cap {max_terms}", n)
    return n


def _groups(xs):
    """Yield (x value, indices) for each distinct value of the flat array xs."""
    order = np.argsort(xs, kind="stable")
    sx = xs[order]
    cuts = np.flatnonzero(np.diff(sx)) + 1
    for idx in np.split(order, cuts):
        if idx.size:
            yield xs[idx[0]], idx


def _derivative_series(ic, a, tau, alpha, x, t, max_terms):
    xb, tb, scalar = _broadcast(x, t)
    _term_count(tb, tau, max_terms)
    xs, ts = xb.ravel(), tb.ravel()
    out = np.zeros(xs.shape)
    log_a = math.log(a)
    groups = [(xv, idx) for xv, idx in _groups(xs) if ts[idx].max() >= 0]
    if not groups:
        return _wrap(out.reshape(xb.shape), scalar)
    N = int(math.floor(max(ts[idx].max() for _, idx in groups) / tau))
    mant, logscale = ic.derivative_tables(N, np.array([xv for xv, _ in groups]))
    for col, (xv, idx) in enumerate(groups):
        vals, bad = _kernels.series_sum(mant[:, col], logscale[:, col], log_a, tau, alpha, ts[idx])
        if bad >= 0:
            raise SeriesOverflowError(f"series term {bad} overflows at x={xv:g}", index=bad)
        out[idx] = vals
    return _wrap(out.reshape(xb.shape), scalar)


def _modes_series(ic, a, tau, x, t, max_terms):
    modes = ic.modes()
    if modes is None:
        raise DomainError(f"{ic.name} has no exponential decomposition")
    xb, tb, scalar = _broadcast(x, t)
    out = np.zeros(xb.shape, dtype=np.complex128)
    for coef, rate in modes:
        d = dexp_scaled(-a * rate, tb, tau, max_terms=max_terms)
        out += coef * np.exp(rate * xb) * d
    return _wrap(out.real, scalar)


def eval_integer(ic: InitialCondition, p: DelayParams, x, t, *,
                 method: str = "series", max_terms: int = MAX_TERMS):
    """Integer-order solution sum_{n<=t/tau} f^(n)(x) (-a)^n (t - n tau)^n / n!.

    ``method="series"`` sums the truncated derivative series (any profile).
    ``method="modes"`` writes f as a sum of exponentials c e^{r x} and uses
    e^{r x} dexp(-a r t; -a r tau) for each, which stays accurate in the
    strongly oscillatory large-t regime where the raw series cancels.
    """
    if p.alpha != 1:
        raise DomainError("eval_integer needs alpha = 1; use eval_fractional")
    if method == "series":
        return _derivative_series(ic, p.a, p.tau, 1.0, x, t, max_terms)
    if method == "modes":
        return _modes_series(ic, p.a, p.tau, x, t, max_terms)
    raise ValueError(f"unknown method {method!r}")


def eval_fractional(ic: InitialCondition, p: DelayParams, x, t, *, max_terms: int = MAX_TERMS):
    """Caputo-order solution sum f^(n)(x) (-a)^n (t - n tau)^(alpha n) / Gamma(alpha n + 1)."""
    return _derivative_series(ic, p.a, p.tau, p.alpha, x, t, max_terms)


def _solution(ic, p, x, t, max_terms=MAX_TERMS):
    if p.alpha == 1:
        return eval_integer(ic, p, x, t, max_terms=max_terms)
    return eval_fractional(ic, p, x, t, max_terms=max_terms)


def _panel_edges(t, tau):
    # kinks of s -> u(x, t - s) sit where t - s is a multiple of tau
    cuts = {0.0, tau}
    for n in range(int(math.floor((t - tau) / tau)) - 1, int(math.floor(t / tau)) + 2):
        s = t - n * tau
        if 0.0 < s < tau:
            cuts.add(s)
    return np.array(sorted(cuts))


def _gauss_nodes(edges, npts):
    xg, wg = np.polynomial.legendre.leggauss(npts)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + hi) * 0.5 + half * xg
    weights = half * wg
    return nodes.ravel(), weights.ravel()


def eval_separable(ic: InitialCondition, g: TimeProfile, p: DelayParams, x, t, *,
                   quad_points_per_panel: int = 16, rtol: float = 1e-8,
                   max_terms: int = MAX_TERMS):
    """Solution for separable initial data f(x) g(t) on [0, tau]:

        g(0) u(x, t) + int_0^tau g'(s) u(x, t - s) ds

    with u the integer (alpha = 1) or fractional solution for f.  The integral
    uses Gauss-Legendre panels split where t - s crosses a breakpoint; a
    second pass with every panel halved is returned, and a QuadratureWarning
    is issued when the two passes differ by more than ``rtol`` (relative).
    """
    xb, tb, scalar = _broadcast(x, t)
    _term_count(tb, p.tau, max_terms)
    g0 = float(g.value(0.0))
    out = np.zeros(xb.shape)
    xs, ts, flat = xb.ravel(), tb.ravel(), out.ravel()
    for i in range(xs.size):
        xi, ti = xs[i], ts[i]
        if ti < 0:
            continue
        edges = _panel_edges(ti, p.tau)
        fine = np.sort(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
        s1, w1 = _gauss_nodes(edges, quad_points_per_panel)
        s2, w2 = _gauss_nodes(fine, quad_points_per_panel)
        times = np.concatenate([[ti], ti - s1, ti - s2])
        u = np.asarray(_solution(ic, p, xi, times, max_terms))
        coarse = math.fsum(w1 * g.derivative(s1) * u[1 : 1 + s1.size])
        refined = math.fsum(w2 * g.derivative(s2) * u[1 + s1.size :])
        total = g0 * u[0] + refined
        scale = max(abs(refined), abs(total))
        if abs(coarse - refined) > rtol * scale:
            warnings.warn(
                f"separable quadrature at x={xi:g}, t={ti:g}: refinement changed the "
                f"integral by {abs(coarse - refined):.3g}",
                QuadratureWarning,
                stacklevel=2,
            )
        flat[i] = total
    return _wrap(out, scalar)


def eval_cosh_closed(p: DelayParams, x, t, *, max_terms: int = MAX_TERMS):
    """Closed form for f = cosh:  e^x/2 dexp(-a t; -a tau) + e^-x/2 dexp(a t; a tau)."""
    if p.alpha != 1:
        raise DomainError("the cosh closed form is for alpha = 1")
    xb, tb, scalar = _broadcast(x, t)
    falling = dexp_scaled(-p.a, tb, p.tau, max_terms=max_terms)
    rising = dexp_scaled(p.a, tb, p.tau, max_terms=max_terms)
    out = 0.5 * np.exp(xb) * falling + 0.5 * np.exp(-xb) * rising
    return _wrap(np.asarray(out, dtype=np.float64), scalar)


def eval_gaussian_hermite(p: DelayParams, x, t, *, max_terms: int = MAX_TERMS):
    """Closed form for f = exp(-x^2):

        e^{-x^2} sum_{n<=t/tau} H_n(x) a^n (t - n tau)^n / n!

    One Hermite table per distinct x; the Gaussian factor is applied in log
    space so it cannot underflow ahead of a large Hermite sum.
    """
    if p.alpha != 1:
        raise DomainError("the Gaussian-Hermite form is for alpha = 1")
    xb, tb, scalar = _broadcast(x, t)
    _term_count(tb, p.tau, max_terms)
    xs, ts = xb.ravel(), tb.ravel()
    out = np.zeros(xs.shape)
    log_a = math.log(p.a)
    for xv, idx in _groups(xs):
        tv = ts[idx]
        if tv.max() < 0:
            continue
        N = int(math.floor(tv.max() / p.tau))
        H = hermite_table(N, xv).values
        # kernel carries (-a)^n; flip odd orders to get a^n
        mant = np.where(np.arange(N + 1) % 2 == 0, H, -H)
        S, bad = _kernels.series_sum(mant, np.zeros(N + 1), log_a, p.tau, 1.0, tv)
        if bad >= 0:
            raise SeriesOverflowError(f"Hermite series term {bad} overflows", index=bad)
        with np.errstate(divide="ignore"):
            mag = np.log(np.abs(S)) - xv * xv
        out[idx] = np.where(S == 0, 0.0, np.sign(S) * np.exp(mag))
    return _wrap(out.reshape(xb.shape), scalar)


def eval_spectral(fhat, p: DelayParams, x, t, *, k_max: float = 6.0, nk: int = 4096,
                  imag_tol: float = 1e-6, max_terms: int = MAX_TERMS,
                  return_imag: bool = False):
    """Fourier superposition

        int f_hat(k) e^{i 2 pi k x} dexp(-i 2 pi k a t; -i 2 pi k a tau) dk

    by the trapezoid rule on [-k_max, k_max].  ``fhat`` is a profile with a
    ``fourier_transform(k)`` method (e.g. Gaussian) or a callable.  The real
    part is returned; an imaginary part above ``imag_tol * max(1, |re|)``
    raises SpectralDiagnosticError.
    """
    if p.alpha != 1:
        raise DomainError("the spectral evaluator is for alpha = 1")
    transform = getattr(fhat, "fourier_transform", fhat)
    xb, tb, scalar = _broadcast(x, t)
    _term_count(tb, p.tau, max_terms)
    k = np.linspace(-k_max, k_max, nk)
    w = np.full(nk, k[1] - k[0])
    w[[0, -1]] *= 0.5
    weighted = w * np.asarray(transform(k), dtype=np.complex128)
    lam = -2j * math.pi * k * p.a
    xs, ts = xb.ravel(), tb.ravel()
    re = np.zeros(xs.shape)
    im = np.zeros(xs.shape)
    for tv, idx in _groups(ts):
        if tv < 0:
            continue
        d, bad = _kernels.dexp_eval_multi(lam * p.tau, tv / p.tau)
        if bad >= 0:
            raise SeriesOverflowError(f"spectral delay exponential overflows at node {bad}", index=bad)
        phase = np.exp(2j * math.pi * np.outer(xs[idx], k))
        val = phase @ (weighted * d)
        re[idx], im[idx] = val.real, val.imag
    bad = np.abs(im) > imag_tol * np.maximum(1.0, np.abs(re))
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise SpectralDiagnosticError(
            f"imaginary part {im[j]:.3g} at x={xs[j]:g}, t={ts[j]:g} exceeds tolerance"
        )
    if return_imag:
        return _wrap(re.reshape(xb.shape), scalar), _wrap(im.reshape(xb.shape), scalar)
    return _wrap(re.reshape(xb.shape), scalar)


def make_evaluator(ic: InitialCondition, p: DelayParams, g: TimeProfile | None = None,
                   method: str = "series") -> Callable:
    """Pick the evaluator for (ic, p, g) and return it as ``f(x, t)``."""
    if method not in ("series", "modes", "closed", "spectral"):
        raise DomainError(f"unknown method {method!r}")
    if g is not None:
        return lambda x, t: eval_separable(ic, g, p, x, t)
    if p.alpha != 1:
        return lambda x, t: eval_fractional(ic, p, x, t)
    if method == "closed":
        if isinstance(ic, Gaussian):
            return lambda x, t: eval_gaussian_hermite(p, x, t)
        if ic.name == "cosh":
            return lambda x, t: eval_cosh_closed(p, x, t)
        raise DomainError(f"no closed form for {ic.name}")
    if method == "spectral":
        return lambda x, t: eval_spectral(ic, p, x, t)
    return lambda x, t: eval_integer(ic, p, x, t, method=method)


def eval_grid(evaluator: Callable, grid: GridSpec) -> np.ndarray:
    """Evaluate on the grid; result has shape (nt, nx), row i holding t[i].

    A failure is re-raised with the offending (t index, x index) attached as
    ``exc.grid_index``.
    """
    T, X = np.meshgrid(grid.t, grid.x, indexing="ij")
    try:
        return np.asarray(evaluator(X, T), dtype=np.float64).reshape(grid.shape)
    except DelayAdvectError as exc:
        for i, ti in enumerate(grid.t):
            for j, xj in enumerate(grid.x):
                try:
                    evaluator(xj, ti)
                except DelayAdvectError:
                    exc.grid_index = (i, j)
                    exc.args = (f"{exc.args[0]} [grid point t[{i}]={ti:g}, x[{j}]={xj:g}]",)
                    raise exc from None
        raise
