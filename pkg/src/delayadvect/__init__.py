"""Exact series solutions of the time-delay advection equation

    u_t(x, t) = -a u_x(x, t - tau)

(and its Caputo fractional counterpart), built on the delay exponential and
delay Mittag-Leffler functions, with numerical cross-checks.
"""

from ._kernels import BACKEND
from .delay import MAX_TERMS, delay_ml, dexp, dexp_derivative, dexp_scaled
from .errors import (
    DelayAdvectError,
    DomainError,
    GridError,
    OracleConfigError,
    QuadratureWarning,
    SeriesOverflowError,
    SpectralDiagnosticError,
    TermCountError,
)
from .initial import (
    ConstantProfile,
    Cos,
    Cosh,
    Custom,
    CustomProfile,
    Exp,
    ExpProfile,
    Gaussian,
    InitialCondition,
    Polynomial,
    PolynomialProfile,
    Sin,
    Sinh,
    TimeProfile,
    ic_nth_derivative,
    ic_value,
    parse_ic,
    parse_profile,
)
from .solutions import (
    DelayParams,
    GridSpec,
    eval_cosh_closed,
    eval_fractional,
    eval_gaussian_hermite,
    eval_grid,
    eval_integer,
    eval_separable,
    eval_spectral,
    make_evaluator,
)
from .special import gamma, heaviside, hermite, hermite_table, loggamma, normalized_hermite
from .verification import (
    OracleConfig,
    OracleField,
    ResidualReport,
    compare,
    oracle_solve,
    residual_fractional,
    residual_integer,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
