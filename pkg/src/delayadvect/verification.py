"""Independent checks for the exact solutions.

* ``residual_integer``: central-difference residual of u_t + a u_x(x, t - tau).
* ``residual_fractional``: L1 Caputo residual of the fractional equation.
* ``oracle_solve``: Fourier pseudospectral method of lines with a delayed RK4
  step, used as a brute-force reference.
* ``compare``: sup and RMS norms of the difference of two fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .errors import DomainError, GridError, OracleConfigError
from .initial import InitialCondition, TimeProfile
from .solutions import DelayParams, GridSpec

BOUNDARY_TOL = 1e-12


def format_report(pairs) -> str:
    """Flat ``key=value`` text block, one pair per line."""
    lines = []
    for key, value in pairs:
        if isinstance(value, float):
            value = f"{value:.17g}"
        lines.append(f"{key}={value}")
    return "\n".join(lines)


@dataclass(frozen=True)
class ResidualReport:
    max_abs_residual: float
    argmax_x: float
    argmax_t: float
    points_checked: int
    exclusion_radius: float
    fd_step: float
    l1_steps: int | None = None

    @property
    def argmax_location(self) -> tuple[float, float]:
        return (self.argmax_x, self.argmax_t)

    def to_text(self) -> str:
        pairs = [
            ("max_abs_residual", self.max_abs_residual),
            ("argmax_x", self.argmax_x),
            ("argmax_t", self.argmax_t),
            ("points_checked", self.points_checked),
            ("breakpoint_exclusion_radius", self.exclusion_radius),
            ("fd_step", self.fd_step),
        ]
        if self.l1_steps is not None:
            pairs.append(("l1_steps", self.l1_steps))
        return format_report(pairs)


def _breakpoint_distance(t, tau):
    r = np.mod(t, tau)
    return np.minimum(r, tau - r)


def _checked_points(p: DelayParams, grid: GridSpec, exclusion: float):
    if exclusion < 0:
        raise DomainError("exclusion radius must be >= 0")
    t = grid.t
    if t.min() <= p.tau + exclusion:
        raise DomainError(
            f"residual checks need t > tau + exclusion = {p.tau + exclusion:g}; "
            f"grid starts at t = {t.min():g}"
        )
    # dist(t - tau, tau Z) equals dist(t, tau Z), so one test covers both
    keep = _breakpoint_distance(t, p.tau) > exclusion
    if not keep.any():
        raise GridError("every grid time lies inside a breakpoint exclusion zone")
    tt, xx = np.meshgrid(t[keep], grid.x, indexing="ij")
    return xx.ravel(), tt.ravel()


def _report(res, xs, ts, exclusion, fd_step, l1_steps=None):
    if not np.all(np.isfinite(res)):
        raise DomainError("non-finite residual; the evaluator returned inf or nan")
    i = int(np.argmax(np.abs(res)))
    return ResidualReport(
        max_abs_residual=float(abs(res[i])),
        argmax_x=float(xs[i]),
        argmax_t=float(ts[i]),
        points_checked=int(res.size),
        exclusion_radius=float(exclusion),
        fd_step=float(fd_step),
        l1_steps=l1_steps,
    )


def residual_integer(evaluator: Callable, p: DelayParams, grid: GridSpec, *,
                     fd_step: float = 1e-4, exclusion: float = 1e-2) -> ResidualReport:
    """Max of |u_t(x, t) + a u_x(x, t - tau)| over the grid, by central differences.

    Times within ``exclusion`` of a multiple of tau are skipped, and grids
    reaching down to t <= tau + exclusion are refused.
    """
    if p.alpha != 1:
        raise DomainError("residual_integer needs alpha = 1; use residual_fractional")
    if not (fd_step > 0 and fd_step < exclusion / 10):
        raise DomainError("fd_step must satisfy 0 < fd_step < exclusion / 10")
    xs, ts = _checked_points(p, grid, exclusion)
    h = fd_step
    ev = lambda x, t: np.asarray(evaluator(x, t), dtype=np.float64)
    u_t = (ev(xs, ts + h) - ev(xs, ts - h)) / (2 * h)
    u_x = (ev(xs + h, ts - p.tau) - ev(xs - h, ts - p.tau)) / (2 * h)
    return _report(u_t + p.a * u_x, xs, ts, exclusion, fd_step)


def l1_nodes(t: float, tau: float, steps: int) -> np.ndarray:
    """Uniform partition of [0, t] into ``steps`` intervals plus the breakpoints n*tau."""
    grid = np.linspace(0.0, t, steps + 1)
    brk = tau * np.arange(1, int(math.floor(t / tau)) + 1)
    nodes = np.union1d(grid, brk[brk < t])
    # drop slivers left by rounding so no interval has zero width
    keep = np.concatenate([[True], np.diff(nodes) > 1e-14 * max(t, 1.0)])
    nodes = nodes[keep]
    nodes[-1] = t
    return nodes


def caputo_l1(values, nodes, alpha: float) -> float:
    """L1 approximation of the Caputo derivative at nodes[-1] from samples on ``nodes``."""
    if not 0 < alpha < 1:
        raise DomainError("the L1 scheme needs 0 < alpha < 1")
    return float(_kernels.l1_caputo(np.asarray(nodes, float), np.asarray(values, float), alpha))


def residual_fractional(evaluator: Callable, p: DelayParams, grid: GridSpec, *,
                        l1_steps: int = 4000, exclusion: float = 1e-2,
                        fd_step: float = 1e-4) -> ResidualReport:
    """Max of |D^alpha u(x, t) + a u_x(x, t - tau)| with an L1 Caputo derivative."""
    if not 0 < p.alpha < 1:
        raise DomainError("residual_fractional needs 0 < alpha < 1")
    if l1_steps < 1:
        raise DomainError("l1_steps must be positive")
    xs, ts = _checked_points(p, grid, exclusion)
    h = fd_step
    u_x = (np.asarray(evaluator(xs + h, ts - p.tau)) - np.asarray(evaluator(xs - h, ts - p.tau))) / (2 * h)
    caputo = np.empty(xs.size)
    for i in range(xs.size):
        nodes = l1_nodes(ts[i], p.tau, l1_steps)
        vals = np.asarray(evaluator(np.full(nodes.size, xs[i]), nodes), dtype=np.float64)
        caputo[i] = caputo_l1(vals, nodes, p.alpha)
    return _report(caputo + p.a * u_x, xs, ts, exclusion, fd_step, l1_steps)


@dataclass(frozen=True)
class OracleConfig:
    """Method-of-lines settings.

    ``stage_interp`` picks the delayed state at RK half steps: ``"hermite"``
    (cubic Hermite from stored states and their time derivatives) or
    ``"linear"`` (average of the two neighbouring stored states).
    ``filter_level`` zeroes Fourier modes of the derivative operator whose
    initial amplitude is below filter_level * max amplitude; 0 disables it.
    """

    L: float
    nx: int
    m: int
    final_time: float
    history: InitialCondition
    profile: TimeProfile | None = None
    save_every: int | None = None
    precision: str = "longdouble"
    stage_interp: str = "hermite"
    filter_level: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.L) and self.L > 0):
            raise OracleConfigError("L must be finite and positive")
        if self.nx < 4 or self.nx & (self.nx - 1):
            raise OracleConfigError(f"nx must be a power of two >= 4, got {self.nx}")
        if self.m < 1:
            raise OracleConfigError("m must be a positive integer")
        if not (math.isfinite(self.final_time) and self.final_time >= 0):
            raise OracleConfigError("final_time must be finite and >= 0")
        if self.precision not in ("double", "longdouble"):
            raise OracleConfigError("precision is 'double' or 'longdouble'")
        if self.stage_interp not in ("hermite", "linear"):
            raise OracleConfigError("stage_interp is 'hermite' or 'linear'")
        if self.save_every is not None and self.save_every < 1:
            raise OracleConfigError("save_every must be positive")


@dataclass
class OracleField:
    """Oracle output: ``u[i, j]`` is the solution at ``t[i]``, ``x[j]``."""

    x: np.ndarray
    t: np.ndarray
    u: np.ndarray
    config: OracleConfig | None = field(default=None, repr=False)

    def at_time(self, t: float) -> np.ndarray:
        i = int(np.argmin(np.abs(self.t - t)))
        if abs(self.t[i] - t) > 1e-9 * max(1.0, abs(t)):
            raise GridError(f"time {t:g} is not a stored oracle step")
        return self.u[i]

    def restrict(self, x_min: float, x_max: float, t: float):
        sel = (self.x >= x_min) & (self.x <= x_max)
        return self.x[sel], self.at_time(t)[sel]


def _eps(dtype) -> float:
    return float(np.finfo(dtype).eps)


def oracle_solve(cfg: OracleConfig, p: DelayParams) -> OracleField:
    """Fourier pseudospectral method of lines on [-L, L) with a delayed RK4 step.

    The step is h = tau/m, so t - tau always lands on a stored step.  States on
    [0, tau] are the history f(x) g(t).  Because the right-hand side depends
    only on the delayed state, each RK4 step needs the delayed field at the
    start, middle and end of the step; the middle comes from ``stage_interp``.
    """
    if p.alpha != 1:
        raise OracleConfigError("the oracle integrates the integer-order equation only")
    dtype = np.longdouble if cfg.precision == "longdouble" else np.float64
    L, nx, m = cfg.L, cfg.nx, cfg.m
    h = p.tau / m
    n_final = int(round(cfg.final_time / h))
    if abs(n_final * h - cfg.final_time) > 1e-9 * max(1.0, cfg.final_time):
        raise OracleConfigError("final_time must be a multiple of tau/m")

    g = cfg.profile
    gval = (lambda s: 1.0) if g is None else (lambda s: float(g.value(s)))
    gder = (lambda s: 0.0) if g is None else (lambda s: float(g.derivative(s)))
    gmax = max(abs(gval(s)) for s in np.linspace(0.0, p.tau, 65))
    with np.errstate(over="ignore", invalid="ignore"):
        edge = gmax * max(abs(float(cfg.history.value(-L))), abs(float(cfg.history.value(L))))
    if not edge < BOUNDARY_TOL:
        raise OracleConfigError(
            f"initial profile is not negligible at |x| = L = {L:g} (|f| = {edge:.3g})"
        )

    x64 = -L + 2 * L * np.arange(nx) / nx
    x = (-L + 2 * L * np.arange(nx, dtype=dtype) / nx).astype(dtype)
    f = np.asarray(cfg.history.value(x))
    # the filter floor follows the precision the profile was actually computed in
    f_eps = _eps(f.dtype) if f.dtype.kind == "f" else _eps(np.float64)
    f = f.astype(dtype)
    k = np.fft.fftfreq(nx, d=2 * L / nx).astype(dtype)
    ik = 2j * np.pi * k
    level = 10 * f_eps if cfg.filter_level is None else cfg.filter_level
    if level > 0:
        amp = np.abs(np.fft.fft(f))
        ik = np.where(amp >= level * amp.max(), ik, 0)

    def rhs(state):
        return -p.a * np.real(np.fft.ifft(ik * np.fft.fft(state)))

    save = cfg.save_every or max(n_final, 1)
    times, frames = [], []

    def store(n, state):
        if n % save == 0 or n == n_final:
            times.append(n * h)
            frames.append(np.asarray(state, dtype=np.float64))

    # ring buffers over the last m + 1 steps: states and their time derivatives
    U = np.empty((m + 1, nx), dtype=dtype)
    dU = np.empty((m + 1, nx), dtype=dtype)
    for n in range(min(m, n_final) + 1):
        U[n % (m + 1)] = f * gval(n * h)
        dU[n % (m + 1)] = f * gder(n * h)
        store(n, U[n % (m + 1)])
    if n_final > m:
        # right derivative at t = tau starts the dynamics
        dU[m % (m + 1)] = rhs(U[0])

    for n in range(m, n_final):
        j0, j1 = (n - m) % (m + 1), (n - m + 1) % (m + 1)
        d0, d1 = U[j0], U[j1]
        # dU of step n is rhs of the state one delay earlier, i.e. k1
        k1 = dU[n % (m + 1)]
        if n - m < m:
            # delayed stage time lies in the known history
            dm = f * gval((n - m + 0.5) * h)
        else:
            if cfg.stage_interp == "hermite":
                dm = 0.5 * (d0 + d1) + (h / 8) * (dU[j0] - dU[j1])
            else:
                dm = 0.5 * (d0 + d1)
        k2 = rhs(dm)
        k4 = rhs(d1)
        new = U[n % (m + 1)] + (h / 6) * (k1 + 4 * k2 + k4)
        slot = (n + 1) % (m + 1)  # overwrites the state at step n - m, no longer needed
        U[slot] = new
        dU[slot] = k4
        if not np.all(np.isfinite(new)):
            raise OracleConfigError(f"oracle diverged at step {n + 1} (t = {(n + 1) * h:g})")
        store(n + 1, new)

    return OracleField(x=x64, t=np.array(times), u=np.array(frames), config=cfg)


def compare(field_a, field_b, *, x_a=None, t_a=None, x_b=None, t_b=None) -> tuple[float, float]:
    """(sup, RMS) of field_a - field_b.

    Fields are arrays or ``OracleField`` objects.  Coordinates, when given (or
    carried by the fields), must match exactly; shapes must always match.
    """
    if isinstance(field_a, OracleField):
        x_a, t_a, field_a = field_a.x, field_a.t, field_a.u
    if isinstance(field_b, OracleField):
        x_b, t_b, field_b = field_b.x, field_b.t, field_b.u
    a = np.asarray(field_a, dtype=np.float64)
    b = np.asarray(field_b, dtype=np.float64)
    if a.shape != b.shape:
        raise GridError(f"field shapes differ: {a.shape} vs {b.shape}")
    for name, ca, cb in (("x", x_a, x_b), ("t", t_a, t_b)):
        if (ca is None) != (cb is None):
            raise GridError(f"only one field carries {name} coordinates")
        if ca is not None and not np.array_equal(np.asarray(ca), np.asarray(cb)):
            raise GridError(f"{name} coordinates differ")
    if a.size == 0:
        raise GridError("empty fields")
    diff = a - b
    return float(np.max(np.abs(diff))), float(np.sqrt(np.mean(diff * diff)))


def comparison_text(sup_error: float, l2_error: float) -> str:
    return format_report([("sup_error", sup_error), ("l2_error", l2_error)])
