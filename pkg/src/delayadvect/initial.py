"""Initial spatial profiles f(x) with exact derivatives, and time profiles g(s).

Every profile supplies ``derivative_table(N, x)`` returning ``(mant, logscale)``
with f^(n)(x) = mant[n] * exp(logscale[n]).  The split keeps high-order
derivatives (Hermite growth, k**n, c**n) representable long after the plain
value would overflow; the series kernels combine it with the time weights in
log space.  Entry 0 always carries f(x) itself with logscale 0 whenever f(x)
is finite, so plateau evaluations return f(x) bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, SeriesOverflowError
from .special import normalized_hermite

MAX_ORDER = 10_000
_LOG2 = math.log(2.0)


def _real(x):
    # float64 unless the caller already works in extended precision
    x = np.asarray(x)
    return x if x.dtype == np.longdouble else x.astype(np.float64)


class InitialCondition:
    """Base class for initial profiles f(x) on the plateau 0 <= t <= tau."""

    name = "custom"

    def value(self, x):
        raise NotImplementedError

    def _table(self, N: int, x: float):
        raise NotImplementedError

    def derivative_table(self, N: int, x: float):
        if N < 0 or N > MAX_ORDER:
            raise DomainError(f"derivative order must lie in [0, {MAX_ORDER}]")
        x = float(x)
        mant, logscale = self._table(int(N), x)
        mant = np.asarray(mant, dtype=np.float64)
        logscale = np.asarray(logscale, dtype=np.float64)
        with np.errstate(over="ignore"):
            f0 = float(self.value(x))
        if math.isfinite(f0):
            mant[0], logscale[0] = f0, 0.0
        return mant, logscale

    def derivative_tables(self, N: int, xs):
        """Tables for many points at once; arrays of shape (N + 1, len(xs))."""
        cols = [self.derivative_table(N, xv) for xv in np.ravel(xs)]
        return np.stack([c[0] for c in cols], axis=1), np.stack([c[1] for c in cols], axis=1)

    def nth_derivative(self, n: int, x):
        """Exact d^n f / dx^n at x (scalar or array)."""
        if np.ndim(x) > 0:
            return np.array([self.nth_derivative(n, xi) for xi in np.ravel(x)]).reshape(np.shape(x))
        mant, logscale = self.derivative_table(n, x)
        if mant[n] == 0.0:
            return 0.0
        shift = max(logscale[n] - 700.0, 0.0)
        try:
            out = float(mant[n]) * math.exp(logscale[n] - shift) * math.exp(shift)
        except OverflowError:
            out = math.inf
        if not math.isfinite(out):
            raise SeriesOverflowError(f"derivative of order {n} overflows at x={x}", index=n)
        return float(out)

    def modes(self):
        """Exponential decomposition [(coef, rate), ...] with f = sum coef*e^(rate*x).

        None when the profile is not a finite exponential sum.
        """
        return None

    def __call__(self, x):
        return self.value(x)


@dataclass(frozen=True)
class Exp(InitialCondition):
    c: float = 1.0

    @property
    def name(self):
        return f"exp:{self.c:g}"

    def value(self, x):
        return np.exp(self.c * _real(x))

    def _table(self, N, x):
        n = np.arange(N + 1)
        if self.c == 0:
            mant = np.where(n == 0, 1.0, 0.0)
            return mant, np.zeros(N + 1)
        mant = np.where((n % 2 == 1) & (self.c < 0), -1.0, 1.0)
        return mant, n * math.log(abs(self.c)) + self.c * x

    def modes(self):
        return [(1.0, self.c)]


@dataclass(frozen=True)
class Cosh(InitialCondition):
    name = "cosh"

    def value(self, x):
        return np.cosh(_real(x))

    def _table(self, N, x):
        n = np.arange(N + 1)
        e = math.exp(-2.0 * abs(x))
        even, odd = 1.0 + e, math.copysign(1.0 - e, x)
        mant = np.where(n % 2 == 0, even, odd)
        return mant, np.full(N + 1, abs(x) - _LOG2)

    def modes(self):
        return [(0.5, 1.0), (0.5, -1.0)]


@dataclass(frozen=True)
class Sinh(InitialCondition):
    name = "sinh"

    def value(self, x):
        return np.sinh(_real(x))

    def _table(self, N, x):
        n = np.arange(N + 1)
        e = math.exp(-2.0 * abs(x))
        even, odd = math.copysign(1.0 - e, x), 1.0 + e
        mant = np.where(n % 2 == 0, even, odd)
        return mant, np.full(N + 1, abs(x) - _LOG2)

    def modes(self):
        return [(0.5, 1.0), (-0.5, -1.0)]


@dataclass(frozen=True)
class Gaussian(InitialCondition):
    """f(x) = exp(-x**2); f^(n) = (-1)^n H_n(x) exp(-x**2)."""

    name = "gaussian"

    def value(self, x):
        x = _real(x)
        return np.exp(-x * x)

    def _table(self, N, x):
        h, log_norm = normalized_hermite(N, x)
        sign = np.where(np.arange(N + 1) % 2 == 0, 1.0, -1.0)
        return sign * h, log_norm - x * x

    def derivative_tables(self, N, xs):
        if N < 0 or N > MAX_ORDER:
            raise DomainError(f"derivative order must lie in [0, {MAX_ORDER}]")
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        h, log_norm = normalized_hermite(int(N), xs)
        sign = np.where(np.arange(N + 1) % 2 == 0, 1.0, -1.0)[:, None]
        mant, logscale = sign * h, log_norm - xs * xs
        f0 = np.exp(-xs * xs)
        mant[0], logscale[0] = f0, 0.0
        return mant, logscale

    def fourier_transform(self, k):
        """f_hat(k) = sqrt(pi) exp(-pi^2 k^2) for f(x) = int f_hat e^{i 2 pi k x} dk."""
        k = np.asarray(k, dtype=np.float64)
        return math.sqrt(math.pi) * np.exp(-(math.pi**2) * k * k)


def _quarter_cycle(theta: float, n: np.ndarray, start: int) -> np.ndarray:
    # derivatives of sin/cos walk sin, cos, -sin, -cos
    cyc = np.array([math.sin(theta), math.cos(theta), -math.sin(theta), -math.cos(theta)])
    return cyc[(n + start) % 4]


@dataclass(frozen=True)
class Sin(InitialCondition):
    k: float = 1.0

    @property
    def name(self):
        return f"sin:{self.k:g}"

    def value(self, x):
        return np.sin(self.k * _real(x))

    def _table(self, N, x):
        n = np.arange(N + 1)
        if self.k == 0:
            return np.zeros(N + 1), np.zeros(N + 1)
        mant = _quarter_cycle(self.k * x, n, 0) * np.where((n % 2 == 1) & (self.k < 0), -1.0, 1.0)
        return mant, n * math.log(abs(self.k))

    def modes(self):
        return [(-0.5j, 1j * self.k), (0.5j, -1j * self.k)]


@dataclass(frozen=True)
class Cos(InitialCondition):
    k: float = 1.0

    @property
    def name(self):
        return f"cos:{self.k:g}"

    def value(self, x):
        return np.cos(self.k * _real(x))

    def _table(self, N, x):
        n = np.arange(N + 1)
        if self.k == 0:
            return np.where(n == 0, 1.0, 0.0), np.zeros(N + 1)
        mant = _quarter_cycle(self.k * x, n, 1) * np.where((n % 2 == 1) & (self.k < 0), -1.0, 1.0)
        return mant, n * math.log(abs(self.k))

    def modes(self):
        return [(0.5, 1j * self.k), (0.5, -1j * self.k)]


@dataclass(frozen=True)
class Polynomial(InitialCondition):
    """f(x) = coeffs[0] + coeffs[1] x + ... (ascending powers)."""

    coeffs: tuple = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise DomainError("a polynomial needs at least one coefficient")

    @property
    def name(self):
        return "poly:" + ",".join(f"{c:g}" for c in self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def value(self, x):
        return np.polynomial.polynomial.polyval(_real(x), self.coeffs)

    def _table(self, N, x):
        mant = np.zeros(N + 1)
        c = np.array(self.coeffs)
        for n in range(min(N, self.degree) + 1):
            mant[n] = np.polynomial.polynomial.polyval(x, c)
            c = np.polynomial.polynomial.polyder(c)
        return mant, np.zeros(N + 1)


@dataclass(frozen=True)
class Custom(InitialCondition):
    """User profile; ``derivative(n, x)`` must return the exact n-th derivative."""

    func: Callable = field(compare=False)
    derivative: Callable = field(compare=False)
    name: str = "custom"

    def value(self, x):
        return self.func(x)

    def _table(self, N, x):
        mant = np.array([float(self.derivative(n, x)) for n in range(N + 1)])
        return mant, np.zeros(N + 1)


def ic_value(ic: InitialCondition, x):
    return ic.value(x)


def ic_nth_derivative(ic: InitialCondition, n: int, x):
    return ic.nth_derivative(n, x)


# --- time profiles g(s) on [0, tau] -------------------------------------------


class TimeProfile:
    """Base class for the time factor g of separable initial data f(x) g(t)."""

    name = "custom"

    def value(self, s):
        raise NotImplementedError

    def derivative(self, s):
        raise NotImplementedError

    def __call__(self, s):
        return self.value(s)


@dataclass(frozen=True)
class ConstantProfile(TimeProfile):
    c: float = 1.0

    @property
    def name(self):
        return f"const:{self.c:g}"

    def value(self, s):
        return np.full(np.shape(s), self.c, dtype=np.float64)[()]

    def derivative(self, s):
        return np.zeros(np.shape(s))[()]


@dataclass(frozen=True)
class ExpProfile(TimeProfile):
    r: float = 1.0

    @property
    def name(self):
        return f"exp:{self.r:g}"

    def value(self, s):
        return np.exp(self.r * np.asarray(s, dtype=np.float64))

    def derivative(self, s):
        return self.r * np.exp(self.r * np.asarray(s, dtype=np.float64))


@dataclass(frozen=True)
class PolynomialProfile(TimeProfile):
    coeffs: tuple = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def name(self):
        return "poly:" + ",".join(f"{c:g}" for c in self.coeffs)

    def value(self, s):
        return np.polynomial.polynomial.polyval(np.asarray(s, dtype=np.float64), self.coeffs)

    def derivative(self, s):
        d = np.polynomial.polynomial.polyder(self.coeffs)
        return np.polynomial.polynomial.polyval(np.asarray(s, dtype=np.float64), d)


@dataclass(frozen=True)
class CustomProfile(TimeProfile):
    func: Callable = field(compare=False)
    deriv: Callable = field(compare=False)
    name: str = "custom"

    def value(self, s):
        return self.func(s)

    def derivative(self, s):
        return self.deriv(s)


# --- CLI names -----------------------------------------------------------------


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise DomainError(f"bad numeric list {text!r}") from None


def _one(text: str) -> float:
    values = _floats(text)
    if len(values) != 1:
        raise DomainError(f"expected a single number, got {text!r}")
    return values[0]


def parse_ic(text: str) -> InitialCondition:
    """Parse ``exp:<c>``, ``cosh``, ``sinh``, ``gaussian``, ``sin:<k>``,
    ``cos:<k>`` or ``poly:<c0,c1,...>``."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    if kind in ("cosh", "sinh", "gaussian") and not arg:
        return {"cosh": Cosh, "sinh": Sinh, "gaussian": Gaussian}[kind]()
    if kind in ("exp", "sin", "cos") and arg:
        v = _one(arg)
        return {"exp": Exp, "sin": Sin, "cos": Cos}[kind](v)
    if kind == "poly" and arg:
        return Polynomial(_floats(arg))
    raise DomainError(f"unknown initial condition {text!r}")


def parse_profile(text: str) -> TimeProfile:
    """Parse ``const:<c>``, ``exp:<r>`` or ``poly:<c0,c1,...>``."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    if kind in ("const", "constant") and arg:
        v = _one(arg)
        return ConstantProfile(v)
    if kind == "exp" and arg:
        v = _one(arg)
        return ExpProfile(v)
    if kind == "poly" and arg:
        return PolynomialProfile(_floats(arg))
    raise DomainError(f"unknown time profile {text!r}")
