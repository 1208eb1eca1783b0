"""One-dimensional Dujella-Petho reduction.

Given ``0 < n*gamma - m + mu < A * B**(-n)`` with ``n <= M``, a convergent
denominator ``q > 6M`` whose ``epsilon = ||mu q|| - M ||gamma q||`` is
positive rules out every ``n`` above ``log(A q / epsilon) / log B``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from ..errors import IndeterminateError, NoPositiveEpsilonError
from .contfrac import ContinuedFraction, cf_expand, convergents
from .hpreal import HPReal

Scalar = Union[HPReal, Fraction, int]


@dataclass(frozen=True)
class ReductionInstance:
    gamma: HPReal
    mu: HPReal
    A: Scalar
    B: HPReal
    M: int | Fraction

    def __post_init__(self) -> None:
        if not HPReal(self.B) > 1:
            raise ValueError("B must exceed 1")
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if not HPReal(self.A) > 0:
            raise ValueError("A must be positive")


@dataclass(frozen=True)
class Attempt:
    t: int
    q: int
    epsilon: HPReal


@dataclass(frozen=True)
class ReductionOutcome:
    q: int
    t: int
    epsilon: HPReal
    new_bound: int
    bound_without_epsilon: int
    attempts: tuple[Attempt, ...] = field(default=(), repr=False)


def _log_ratio_ceiling(numerator: HPReal, log_b: HPReal) -> int:
    return (numerator.log() / log_b).upper_ceil()


def epsilon_at(inst: ReductionInstance, q: int) -> HPReal:
    """Enclosure of ||mu q|| - M ||gamma q||."""
    return (inst.mu * q).dist_to_int() - (inst.gamma * q).dist_to_int() * inst.M


def dp_reduce(
    inst: ReductionInstance,
    start_index: int = 0,
    cf: ContinuedFraction | None = None,
) -> ReductionOutcome:
    """Walk convergents of gamma from ``start_index`` to the first usable q.

    Usable means ``q > 6M`` and a certified ``epsilon > 0``. The returned
    bound is the smallest integer not below ``log(A q / epsilon) / log B``
    over the whole enclosure.
    """
    if cf is None:
        cf = cf_expand(inst.gamma)
    convs = convergents(cf)
    log_b = HPReal(inst.B).log()
    six_m = 6 * inst.M
    tried: list[Attempt] = []
    for conv in convs[start_index:]:
        if conv.q <= six_m:
            continue
        eps = epsilon_at(inst, conv.q)
        tried.append(Attempt(conv.t, conv.q, eps))
        if eps.upper <= 0:
            continue
        if eps.lower <= 0:
            raise IndeterminateError(
                f"sign of epsilon at q_{conv.t} undecided; raise precision"
            )
        aq = HPReal(inst.A) * conv.q
        return ReductionOutcome(
            q=conv.q,
            t=conv.t,
            epsilon=eps,
            new_bound=_log_ratio_ceiling(aq / eps, log_b),
            bound_without_epsilon=_log_ratio_ceiling(aq, log_b),
            attempts=tuple(tried),
        )
    raise NoPositiveEpsilonError(
        f"no convergent from index {start_index} among {len(convs)} gave epsilon > 0"
    )
