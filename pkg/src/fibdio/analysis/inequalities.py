"""Exact checks of the golden-ratio inequalities used to bound the equations.

Every quantity involved lies in Q(sqrt 5), so each predicate is decided with
rational arithmetic and never returns an indeterminate answer.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from ..errors import ExceptionalPairError, ExcludedParameterError
from ..golden import ALPHA, BETA, QSqrt5, sqrt5_power
from ..sequences import fib


def sqrt5_rational_gap(p: int, q: int) -> bool:
    """Whether |q sqrt5 - p| >= 1/(6q).

    Uses |q sqrt5 - p| = |5q^2 - p^2| / (q sqrt5 + p), so the claim becomes
    6q |5q^2 - p^2| - p >= q sqrt5, decided by squaring integers.
    """
    if p < 0 or q <= 0:
        raise ValueError("need p >= 0 and q > 0")
    lhs = 6 * q * abs(5 * q * q - p * p) - p
    return lhs >= 0 and lhs * lhs >= 5 * q * q


def alpha_power_gap(n: int, s: int) -> bool:
    """Whether |alpha^n - sqrt5^(s-1)| >= 1 - |beta|^n."""
    if s in (2, 4):
        raise ExcludedParameterError(f"s={s} is excluded (alpha^n can sit close to sqrt5^(s-1))")
    if n < 1 or s < 1:
        raise ValueError("need n >= 1 and s >= 1")
    gap = abs(ALPHA**n - sqrt5_power(s - 1))
    return gap >= 1 - abs(BETA) ** n


class BinetPowerError(NamedTuple):
    bound2s: bool | None
    bound2pow: bool


def binet_power_error(n: int, s: int) -> BinetPowerError:
    """Check |(F_n sqrt5)^s - alpha^(ns)| against 2^s and 2s times alpha^(n(s-2)).

    ``bound2s`` is None when n <= log_alpha(s), where that bound is not claimed.
    """
    if n < 1 or s < 1:
        raise ValueError("need n >= 1 and s >= 1")
    error = abs(QSqrt5(0, fib(n)) ** s - ALPHA ** (n * s))
    scale = ALPHA ** (n * (s - 2))
    bound2pow = error < scale * 2**s
    bound2s = None
    if ALPHA**n > s:
        bound2s = error < scale * (2 * s)
    return BinetPowerError(bound2s, bound2pow)


def nonvanishing_value(n: int, s: int, d: int) -> QSqrt5:
    """1 + alpha^(sd) - alpha^n sqrt5^(s-1), exactly."""
    return 1 + ALPHA ** (s * d) - ALPHA**n * sqrt5_power(s - 1)


def nonvanishing_check(n: int, s: int, d: int) -> bool:
    """Whether 1 + alpha^(sd) - alpha^n sqrt5^(s-1) is nonzero.

    (s, d) = (2, 1) and s = 1 are the exceptional pairs where it can vanish.
    """
    if s < 1 or d < 1:
        raise ValueError("need s >= 1 and d >= 1")
    if s == 1 or (s, d) == (2, 1):
        raise ExceptionalPairError(f"(s, d) = ({s}, {d}) is in the exceptional set")
    return nonvanishing_value(n, s, d).sign() != 0


def fib_bracket_exact(n: int) -> tuple[bool, bool]:
    """(alpha^(n-7/4) < F_n, F_n < alpha^(n-3/2)), decided exactly.

    Raised to the fourth power the claims become alpha^(4n-7) < F_n^4 and
    F_n^2 < alpha^(2n-3), both inside Q(sqrt 5).
    """
    f = Fraction(fib(n))
    return ALPHA ** (4 * n - 7) < f**4, f**2 < ALPHA ** (2 * n - 3)
