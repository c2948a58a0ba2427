"""Exception types raised by delayadvect."""

from __future__ import annotations


class DelayAdvectError(Exception):
    """Base class for all package errors."""


class DomainError(DelayAdvectError, ValueError):
    """An argument lies outside the domain of the operation."""


class SeriesOverflowError(DelayAdvectError, OverflowError):
    """A series term (or recurrence node) left the double-precision range.

    ``index`` is the offending term / node index when one is known.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class TermCountError(DelayAdvectError, ValueError):
    """floor(t/tau) exceeds the permitted number of series terms."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


class GridError(DelayAdvectError, ValueError):
    """Malformed or mismatched evaluation grid."""


class OracleConfigError(DelayAdvectError, ValueError):
    """The method-of-lines oracle cannot be run with this configuration."""


class SpectralDiagnosticError(DelayAdvectError, ArithmeticError):
    """Spectral quadrature produced a non-negligible imaginary part."""


class QuadratureWarning(RuntimeWarning):
    """Panel refinement changed a quadrature result more than expected."""
