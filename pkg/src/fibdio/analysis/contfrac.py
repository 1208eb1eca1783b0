"""Certified simple continued fractions and their convergents.

A quotient is emitted only when both endpoints of the enclosing interval
agree on it, so every reported ``a_i`` is the true partial quotient of
every real number inside the interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from ..errors import IndeterminateError, PrecisionExhaustedError
from .hpreal import DEFAULT_DIGITS, GUARD_DIGITS, Constant, HPReal, working_digits

MAX_RETRIES = 4


@dataclass(frozen=True)
class ContinuedFraction:
    quotients: tuple[int, ...]
    certified_count: int

    def __post_init__(self) -> None:
        if self.certified_count > len(self.quotients):
            raise ValueError("certified_count exceeds the number of quotients")
        if any(a < 1 for a in self.quotients[1:]):
            raise ValueError("partial quotients after a_0 must be >= 1")

    def __len__(self) -> int:
        return len(self.quotients)

    def __getitem__(self, i: int) -> int:
        return self.quotients[i]

    def max_quotient(self, first: int, last: int) -> int:
        """max(a_first .. a_last), inclusive."""
        return max(self.quotients[first : last + 1])


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    t: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def rational_cf(x: Fraction) -> list[int]:
    """Finite continued fraction of a rational (the short representation)."""
    num, den = x.numerator, x.denominator
    out = []
    while den:
        a, r = divmod(num, den)
        out.append(a)
        num, den = den, r
    return out


def cf_expand(x: HPReal, count: int | None = None) -> ContinuedFraction:
    """The first ``count`` certified partial quotients of ``x``.

    With ``count=None`` every quotient the enclosure can certify is returned.
    """
    lo_cf = rational_cf(x.lower)
    hi_cf = rational_cf(x.upper)
    common = 0
    for a, b in zip(lo_cf, hi_cf):
        if a != b:
            break
        common += 1
    # the last quotient of a rational is ambiguous (a = (a-1) + 1/1)
    certified = min(common, len(lo_cf) - 1, len(hi_cf) - 1)
    if count is None:
        count = certified
    if certified < count:
        raise PrecisionExhaustedError(
            f"only {certified} of {count} partial quotients certified",
            needed_digits=None,
        )
    return ContinuedFraction(tuple(lo_cf[:count]), count)


def expand_with_retry(
    build: Callable[[], HPReal], count: int, digits: int = DEFAULT_DIGITS
) -> ContinuedFraction:
    """Expand ``build()`` evaluated at rising precision until ``count`` certify.

    Precision doubles on each failure, at most :data:`MAX_RETRIES` times.
    """
    current = digits
    for _ in range(MAX_RETRIES + 1):
        with working_digits(current + GUARD_DIGITS):
            x = build()
        try:
            return cf_expand(x, count)
        except PrecisionExhaustedError:
            current *= 2
    raise PrecisionExhaustedError(
        f"{count} partial quotients need more than {current // 2} digits",
        needed_digits=current,
    )


@lru_cache(maxsize=64)
def expand_constant(
    name: Constant | str, count: int, digits: int = DEFAULT_DIGITS
) -> ContinuedFraction:
    from .hpreal import _build_constant

    const = Constant(name)
    return expand_with_retry(lambda: _build_constant(const), count, digits)


def convergents(cf: ContinuedFraction, count: int | None = None) -> list[Convergent]:
    """p_t/q_t for t = 0 .. count-1 by the standard three-term recurrence."""
    if count is None:
        count = cf.certified_count
    if count > cf.certified_count:
        raise PrecisionExhaustedError(
            f"{count} convergents requested, {cf.certified_count} certified"
        )
    out = []
    p_prev, p = 0, 1  # p_{-2}, p_{-1}
    q_prev, q = 1, 0
    for t in range(count):
        a = cf.quotients[t]
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Convergent(p, q, t))
    return out


def legendre_check(gamma: HPReal, p: int, q: int) -> bool:
    """Whether |gamma - p/q| < 1/(2 q^2), certified.

    Raises IndeterminateError when the enclosure of gamma straddles the
    threshold.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    gap = abs(gamma - Fraction(p, q))
    threshold = Fraction(1, 2 * q * q)
    if gap.upper < threshold:
        return True
    if gap.lower >= threshold:
        return False
    raise IndeterminateError("Legendre threshold undecided; raise precision")


def convergent_errors_ok(gamma: HPReal, cf: ContinuedFraction, convs: Sequence[Convergent]) -> bool:
    """Check 1/((a_{t+1}+2) q_t^2) < |gamma - p_t/q_t| < 1/q_t^2 for every t.

    Only convergents followed by a certified quotient are checked.
    """
    for c in convs:
        if c.t + 1 >= cf.certified_count:
            break
        gap = abs(gamma - c.value)
        upper = Fraction(1, c.q * c.q)
        lower = Fraction(1, (cf.quotients[c.t + 1] + 2) * c.q * c.q)
        if not (gap.upper < upper and gap.lower > lower):
            return False
    return True
