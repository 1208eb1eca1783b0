"""Exception hierarchy shared by every fibdio module."""

from __future__ import annotations


class FibdioError(Exception):
    """Base class for all library errors."""


class IndexBelowRangeError(FibdioError, ValueError):
    """A k-bonacci index below -(k-2) was requested."""


class PrecisionExhaustedError(FibdioError, ArithmeticError):
    """The working precision is too low to certify the requested result.

    ``needed_digits`` is a suggestion for the next attempt, not a guarantee.
    """

    def __init__(self, message: str, needed_digits: int | None = None) -> None:
        super().__init__(message)
        self.needed_digits = needed_digits


class IndeterminateError(PrecisionExhaustedError):
    """An interval comparison straddles its threshold."""


class NoPositiveEpsilonError(FibdioError, ArithmeticError):
    """No convergent in reach produced a certified positive epsilon."""


class DegenerateFormError(FibdioError, ValueError):
    """A linear form whose exponents are all zero."""


class ExcludedParameterError(FibdioError, ValueError):
    """A parameter value outside the domain where an inequality is claimed."""


class ExceptionalPairError(ExcludedParameterError):
    """(s, d) lies in the exceptional set where the expression may vanish."""


class RangeTooLargeError(FibdioError, ValueError):
    """A brute-force search box exceeds the candidate guard."""
