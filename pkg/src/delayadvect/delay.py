"""Delay exponential and delay Mittag-Leffler functions.

``dexp(lam*t; lam*tau)`` is the piecewise polynomial

    sum_{n=0}^{floor(t/tau)} lam**n (t - n*tau)**n / n!

which equals 1 on [0, tau), vanishes for t < 0 and solves
T'(t) = lam * T(t - tau) away from the breakpoints t = n*tau.

Two evaluation routes are provided.  ``method="steps"`` (the default) uses
the exact re-expansion about the breakpoint nodes T_k = T(k*tau),

    T(k*tau + s*tau) = sum_j (lam*tau)**j s**j / j! * T_{k-j},

which never forms the large alternating terms of the raw series and keeps
full relative accuracy even when T decays by tens of orders of magnitude.
``method="series"`` sums the raw series with compensated summation; it is
the literal definition and serves as a cross-check where it is well
conditioned.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import _kernels
from .errors import DomainError, SeriesOverflowError, TermCountError

MAX_TERMS = 10_000


def _check_tau(tau):
    if not (np.isfinite(tau) and tau > 0):
        raise DomainError(f"tau must be finite and > 0, got {tau!r}")


def _prepare_t(t, tau, max_terms):
    t_arr = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(t_arr)):
        raise DomainError("t must be finite")
    u = t_arr / tau
    if u.size and u.max() >= 0:
        count = int(math.floor(u.max()))
        if count > max_terms:
            raise TermCountError(
                f"floor(t/tau) = {count} exceeds the term cap {max_terms}", count
            )
    return t_arr, u


def _finish(values, t_arr):
    if t_arr.ndim == 0:
        v = values.reshape(())[()]
        return complex(v) if np.iscomplexobj(values) else float(v)
    return values.reshape(t_arr.shape)


def _as_lambda(lam):
    if isinstance(lam, (complex, np.complexfloating)):
        return complex(lam)
    return float(lam)


def dexp_scaled(lam, t, tau, *, max_terms: int = MAX_TERMS, method: str = "steps"):
    """Delay exponential dexp(lam*t; lam*tau).

    ``t`` may be a scalar or array.  A real ``lam`` gives real output, a complex
    ``lam`` complex output.  The step function is evaluated on t/tau, so lam
    never affects which terms are present.
    """
    _check_tau(tau)
    lam = _as_lambda(lam)
    t_arr, u = _prepare_t(t, tau, max_terms)
    if method == "steps":
        values, bad = _kernels.dexp_eval(lam * tau, u.ravel())
        if bad >= 0:
            raise SeriesOverflowError(
                f"delay exponential overflows at node {bad} (t = {bad * tau:g})", index=bad
            )
    elif method == "series":
        values = _dexp_series(lam, t_arr.ravel(), tau)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _finish(np.asarray(values), t_arr)


def dexp(t, tau, *, max_terms: int = MAX_TERMS, method: str = "steps"):
    """Delay exponential dexp(t; tau), i.e. the lam = 1 case."""
    return dexp_scaled(1.0, t, tau, max_terms=max_terms, method=method)


def dexp_derivative(lam, t, tau, *, max_terms: int = MAX_TERMS, method: str = "steps"):
    """d/dt dexp(lam*t; lam*tau) = lam * dexp(lam*(t - tau); lam*tau), t != 0."""
    _check_tau(tau)
    if np.any(np.asarray(t) == 0):
        raise DomainError("the derivative identity excludes t = 0")
    lam = _as_lambda(lam)
    shifted = np.asarray(t, dtype=np.float64) - tau
    return lam * dexp_scaled(lam, shifted, tau, max_terms=max_terms, method=method)


def delay_ml(alpha, t, tau, *, max_terms: int = MAX_TERMS):
    """Delay fractional Mittag-Leffler function dE_alpha^-(-t; -tau).

        sum_{n=0}^{floor(t/tau)} (-1)**n (t - n*tau)**(alpha*n) / Gamma(alpha*n + 1)

    For alpha = 1 this is dexp(-t; -tau) and is routed through the node
    recurrence; otherwise the series is summed with compensation.
    """
    if not (0 < alpha <= 1):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    _check_tau(tau)
    if alpha == 1:
        return dexp_scaled(-1.0, t, tau, max_terms=max_terms)
    t_arr, _ = _prepare_t(t, tau, max_terms)
    flat = t_arr.ravel()
    n_terms = int(math.floor(max(flat.max(), 0.0) / tau)) + 1 if flat.size else 1
    values, bad = _kernels.series_sum(
        np.ones(n_terms), np.zeros(n_terms), 0.0, float(tau), float(alpha), flat
    )
    if bad >= 0:
        raise SeriesOverflowError(f"delay Mittag-Leffler term {bad} overflows", index=bad)
    return _finish(np.asarray(values), t_arr)


def _dexp_series(lam, t, tau):
    if isinstance(lam, complex):
        return np.array([_complex_series(lam, ti, tau) for ti in t])
    n_terms = int(math.floor(max(t.max(), 0.0) / tau)) + 1 if t.size else 1
    if lam == 0:
        return np.where(t >= 0, 1.0, 0.0)
    n = np.arange(n_terms)
    # lam^n = (-a)^n * (-sign(lam))^n with a = |lam|
    mant = np.ones(n_terms) if lam < 0 else np.where(n % 2 == 0, 1.0, -1.0)
    values, bad = _kernels.series_sum(
        mant, np.zeros(n_terms), math.log(abs(lam)), float(tau), 1.0, t
    )
    if bad >= 0:
        raise SeriesOverflowError(f"delay exponential term {bad} overflows", index=bad)
    return values


def _complex_series(lam: complex, t: float, tau: float) -> complex:
    if t < 0:
        return 0j
    re, im = [1.0], [0.0]
    for n in range(1, int(math.floor(t / tau)) + 1):
        base = lam * (t - n * tau)
        if base == 0:
            continue
        log_term = n * cmath.log(base) - math.lgamma(n + 1.0)
        if log_term.real > 709.0:
            raise SeriesOverflowError(f"delay exponential term {n} overflows", index=n)
        term = cmath.exp(log_term)
        re.append(term.real)
        im.append(term.imag)
    return complex(math.fsum(re), math.fsum(im))
