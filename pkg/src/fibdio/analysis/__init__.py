"""Certified reals, continued fractions, reductions and explicit bounds."""

from .contfrac import (
    ContinuedFraction,
    Convergent,
    cf_expand,
    convergents,
    expand_constant,
    expand_with_retry,
    legendre_check,
)
from .hpreal import DEFAULT_DIGITS, GUARD_DIGITS, Constant, HPReal, hp_const, working_digits
from .inequalities import (
    alpha_power_gap,
    binet_power_error,
    nonvanishing_check,
    sqrt5_rational_gap,
)
from .matveev import MatveevBound, MatveevInstance, MatveevTerm, matveev_constant, matveev_lambda
from .reduction import ReductionInstance, ReductionOutcome, dp_reduce

__all__ = [
    "Constant",
    "ContinuedFraction",
    "Convergent",
    "DEFAULT_DIGITS",
    "GUARD_DIGITS",
    "HPReal",
    "MatveevBound",
    "MatveevInstance",
    "MatveevTerm",
    "ReductionInstance",
    "ReductionOutcome",
    "alpha_power_gap",
    "binet_power_error",
    "cf_expand",
    "convergents",
    "dp_reduce",
    "expand_constant",
    "expand_with_retry",
    "hp_const",
    "legendre_check",
    "matveev_constant",
    "matveev_lambda",
    "nonvanishing_check",
    "sqrt5_rational_gap",
    "working_digits",
]
