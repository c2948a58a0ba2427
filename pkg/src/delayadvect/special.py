"""Scalar special functions: Heaviside step, gamma, Hermite polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SeriesOverflowError

GAMMA_MAX_ARG = 171.0
HERMITE_MAX_ORDER = 10_000


def heaviside(y):
    """Right-continuous unit step: 0 for y < 0 and 1 for y >= 0.

    Accepts scalars (returns an ``int``) or arrays (returns an int array).
    """
    if np.ndim(y) == 0:
        return 0 if y < 0 else 1
    return np.where(np.asarray(y) < 0, 0, 1)


def gamma(z: float) -> float:
    """Gamma function for 0 < z <= 171."""
    if not z > 0:
        raise DomainError(f"gamma requires z > 0, got {z!r}")
    if z > GAMMA_MAX_ARG:
        raise SeriesOverflowError(f"gamma({z!r}) overflows double precision")
    return math.gamma(z)


def loggamma(z: float) -> float:
    """log Gamma(z) for z > 0; safe far beyond the range of ``gamma``."""
    if not z > 0:
        raise DomainError(f"loggamma requires z > 0, got {z!r}")
    return math.lgamma(z)


@dataclass(frozen=True)
class HermiteTable:
    """Physicists' Hermite values H_0(x)..H_max_order(x) at one point."""

    x: float
    values: np.ndarray

    @property
    def max_order(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> float:
        return float(self.values[n])


def hermite_table(n: int, x: float) -> HermiteTable:
    """All H_0(x)..H_n(x) from the upward three-term recurrence.

    H_{k+1} = 2x H_k - 2k H_{k-1}.  Raises SeriesOverflowError naming the first
    order that leaves the double range.
    """
    if n < 0 or n > HERMITE_MAX_ORDER or int(n) != n:
        raise DomainError(f"hermite order must be an integer in [0, {HERMITE_MAX_ORDER}]")
    n = int(n)
    x = float(x)
    h = np.empty(n + 1)
    h[0] = 1.0
    if n >= 1:
        h[1] = 2.0 * x
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n):
            h[k + 1] = 2.0 * x * h[k] - 2.0 * k * h[k - 1]
            if not math.isfinite(h[k + 1]):
                raise SeriesOverflowError(f"H_{k + 1}({x}) overflows", index=k + 1)
    return HermiteTable(x=x, values=h)


def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x)."""
    return hermite_table(n, x)[n]


def normalized_hermite(n: int, x):
    """Scaled Hermite values for overflow-free high orders.

    Returns ``(h, log_norm)`` with H_k(x) = h[k] * exp(log_norm[k]) for
    k = 0..n.  ``x`` may be a scalar or 1-d array (then ``h`` has shape
    (n + 1, len(x))).  The scaled recurrence keeps h near exp(x**2 / 2) and
    is renormalised whenever it grows past 1e200.
    """
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    h = np.empty((n + 1, x.size))
    offset = np.zeros(x.size)
    log_norm = np.empty((n + 1, x.size))
    h[0] = 1.0
    log_norm[0] = 0.0
    # base normalisation sqrt(2^k k!) is applied analytically
    base = 0.5 * (np.arange(n + 1) * math.log(2.0)
                  + np.array([math.lgamma(k + 1.0) for k in range(n + 1)]))
    if n >= 1:
        h[1] = math.sqrt(2.0) * x
        log_norm[1] = base[1]
    prev, cur = h[0].copy(), h[min(n, 1)].copy()
    for k in range(1, n):
        nxt = math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1)) * prev
        big = np.abs(nxt) > 1e200
        if big.any():
            nxt[big] *= 1e-200
            cur[big] *= 1e-200
            offset[big] += 200.0 * math.log(10.0)
        prev, cur = cur, nxt
        h[k + 1] = nxt
        log_norm[k + 1] = base[k + 1] + offset
    if scalar:
        return h[:, 0], log_norm[:, 0]
    return h, log_norm
