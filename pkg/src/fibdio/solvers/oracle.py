"""Filter-free exhaustive search, used to cross-check the sieving pipelines."""

from __future__ import annotations

from ..errors import RangeTooLargeError
from ..modular import confirm_exact
from ..sequences import KBonacciGenerator, fib
from .types import EquationKind, EquationSpec, Solution

CANDIDATE_GUARD = 10**7


def _boxes(spec: EquationSpec):
    n_lo, n_hi = spec.n_range
    d_lo, d_hi = spec.d_range
    for n in range(n_lo, n_hi + 1):
        for d in range(d_lo, d_hi + 1):
            if spec.nd_max is not None and n + d > spec.nd_max:
                break
            if spec.kind is EquationKind.CONSECUTIVE_POWERS and not d + 1 < n:
                break
            yield n, d


def candidate_count(spec: EquationSpec) -> int:
    pairs = sum(1 for _ in _boxes(spec))
    if spec.exponent():
        s_lo, s_hi = spec.s_range
        return pairs * (s_hi - s_lo + 1)
    return pairs


def brute_force_oracle(spec: EquationSpec, guard: int = CANDIDATE_GUARD) -> list[Solution]:
    """Every solution in the box of ``spec``, by exact evaluation only."""
    count = candidate_count(spec)
    if count > guard:
        raise RangeTooLargeError(f"{count} candidates exceed the guard of {guard}")
    found = []
    if spec.kind in (EquationKind.SQUARES_K2, EquationKind.SQUARES_K):
        gen = KBonacciGenerator(spec.k)
        for n, d in _boxes(spec):
            value = gen[n] ** 2 + gen[n + d] ** 2
            m = gen.index_of(value)
            if m is not None:
                found.append(Solution(n, d, 2, m, value))
    elif spec.kind is EquationKind.TWO_POWERS:
        s_lo, s_hi = spec.s_range
        for n, d in _boxes(spec):
            a, b = fib(n), fib(n + d)
            for s in range(s_lo, s_hi + 1):
                value = a**s + b**s
                m = confirm_exact(value)
                if m is not None:
                    found.append(Solution(n, d, s, m, value))
    else:
        s_lo, s_hi = spec.s_range
        for n, d in _boxes(spec):
            terms = [fib(n + i) for i in range(d + 1)]
            for s in range(s_lo, s_hi + 1):
                value = sum(t**s for t in terms)
                m = confirm_exact(value)
                if m is not None:
                    found.append(Solution(n, d, s, m, value))
    return sorted(found)
