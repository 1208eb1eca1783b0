"""Fibonacci numbers modulo small primes, used as a sieve.

A value v can equal some F_m only if, for every prime p, v mod p is one of
the residues F_0, ..., F_{pi(p)-1} mod p. Each :class:`PrimeFilter` holds
that residue set; a :class:`FilterChain` applies several of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .sequences import fib_pair

DEFAULT_PRIMES = (39161, 28657, 9349, 9901)
MAX_MODULUS = 2**31
_MASK_LIMIT = 1 << 24

_LOG2_ALPHA = math.log2((1 + math.sqrt(5)) / 2)
_LOG2_SQRT5 = math.log2(math.sqrt(5))


def pisano_period(p: int) -> int:
    """Smallest pi > 0 with F_pi = 0 and F_{pi+1} = 1 mod p."""
    if p < 2:
        raise ValueError("modulus must be >= 2")
    a, b = 0, 1
    for i in range(1, 6 * p + 1):
        a, b = b, (a + b) % p
        if a == 0 and b == 1:
            return i
    raise ArithmeticError(f"no period found for {p} within 6p steps")


def fib_mod(n: int, p: int) -> int:
    """F_n mod p by fast doubling."""
    if n < 0:
        raise ValueError("n must be non-negative")
    a, b = 0, 1
    for bit in bin(n)[2:]:
        c = a * ((2 * b - a) % p) % p
        d = (a * a + b * b) % p
        if bit == "1":
            a, b = d, (c + d) % p
        else:
            a, b = c, d
    return a


@dataclass(frozen=True)
class PrimeFilter:
    p: int
    period: int
    residues: tuple[int, ...] = field(repr=False)
    membership: frozenset[int] = field(repr=False)

    def __post_init__(self) -> None:
        if not 2 <= self.p < MAX_MODULUS:
            raise ValueError(f"modulus {self.p} outside [2, 2^31)")
        if len(self.residues) != self.period:
            raise ValueError("residue table must cover exactly one period")

    def __contains__(self, value: int) -> bool:
        return value % self.p in self.membership

    def fib(self, n: int) -> int:
        return self.residues[n % self.period]

    @property
    def density(self) -> float:
        return len(self.membership) / self.p

    def member_mask(self) -> np.ndarray:
        return _member_mask(self)

    def contains_array(self, values: np.ndarray) -> np.ndarray:
        """Vectorized membership for residues already reduced mod p."""
        if self.p <= _MASK_LIMIT:
            return self.member_mask()[values]
        return np.isin(values, np.fromiter(self.membership, dtype=np.int64))


@lru_cache(maxsize=64)
def _member_mask(filt: PrimeFilter) -> np.ndarray:
    mask = np.zeros(filt.p, dtype=bool)
    mask[list(filt.membership)] = True
    mask.setflags(write=False)
    return mask


def build_filter(p: int) -> PrimeFilter:
    """Residue table over one full Pisano period and its value set."""
    period = pisano_period(p)
    residues = []
    a, b = 0, 1
    for _ in range(period):
        residues.append(a)
        a, b = b, (a + b) % p
    return PrimeFilter(p, period, tuple(residues), frozenset(residues))


@dataclass(frozen=True)
class FilterChain:
    """Filters applied in ascending order of period."""

    filters: tuple[PrimeFilter, ...]

    def __post_init__(self) -> None:
        if not self.filters:
            raise ValueError("a filter chain needs at least one prime")
        moduli = [f.p for f in self.filters]
        if len(set(moduli)) != len(moduli):
            raise ValueError(f"repeated modulus in {moduli}")
        ordered = tuple(sorted(self.filters, key=lambda f: (f.period, f.p)))
        object.__setattr__(self, "filters", ordered)

    @classmethod
    def from_primes(cls, primes: Iterable[int]) -> FilterChain:
        return cls(tuple(build_filter(p) for p in primes))

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(f.p for f in self.filters)

    def __iter__(self):
        return iter(self.filters)

    def __len__(self) -> int:
        return len(self.filters)

    def pass_fraction(self) -> float:
        """Fraction of uniformly random integers passing every filter."""
        return math.prod(f.density for f in self.filters)


@lru_cache(maxsize=8)
def default_chain(primes: tuple[int, ...] = DEFAULT_PRIMES) -> FilterChain:
    return FilterChain.from_primes(primes)


def load_primes(path: str | Path) -> list[int]:
    """Read moduli from a text file, one per line; '#' starts a comment."""
    primes = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            primes.append(int(text))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: not an integer: {text!r}") from None
    if not primes:
        raise ValueError(f"{path}: no primes listed")
    return primes


Expression = Union[int, Callable[[PrimeFilter], int]]


def _residue(expr: Expression, filt: PrimeFilter) -> int:
    if isinstance(expr, int):
        return expr % filt.p
    return expr(filt) % filt.p


def first_failure(chain: FilterChain, expr: Expression) -> int | None:
    """Position of the first filter rejecting ``expr``, or None."""
    for i, filt in enumerate(chain.filters):
        if _residue(expr, filt) not in filt.membership:
            return i
    return None


def passes(chain: FilterChain, expr: Expression) -> bool:
    """Whether ``expr`` is a Fibonacci residue modulo every prime of the chain.

    ``expr`` is either an exact integer or a function of the filter that
    returns the residue, e.g. ``power_sum([(n, s), (n + d, s)])``.
    """
    return first_failure(chain, expr) is None


def power_sum(terms: Sequence[tuple[int, int]]) -> Callable[[PrimeFilter], int]:
    """Expression sum F_{n_i}^{s_i} evaluated through the residue table."""

    def residue(filt: PrimeFilter) -> int:
        return sum(pow(filt.fib(n), s, filt.p) for n, s in terms) % filt.p

    return residue


def confirm_exact(value: int) -> int | None:
    """m with F_m == value, or None; 1 is reported as m = 2."""
    if value < 0:
        return None
    if value == 0:
        return 0
    if value == 1:
        return 2
    # F_m ~ alpha^m / sqrt5; the estimate is within one or two of m
    guess = int((value.bit_length() - 0.5 + _LOG2_SQRT5) / _LOG2_ALPHA)
    m = max(guess - 3, 1)
    a, b = fib_pair(m)
    while b <= value:
        a, b = b, a + b
        m += 1
    # now F_m <= value < F_{m+1}
    while a > value:
        m -= 1
        a, b = b - a, a
    return m if a == value else None


def pow_mod_array(base: np.ndarray, exps: np.ndarray, p: int) -> np.ndarray:
    """Elementwise base**exps mod p for int64 arrays, p < 2^31."""
    if p >= MAX_MODULUS:
        raise ValueError("modulus too large for 64-bit products")
    base = np.asarray(base, dtype=np.int64) % p
    exps = np.asarray(exps, dtype=np.int64)
    base, exps = np.broadcast_arrays(base, exps)
    base = base.copy()
    exps = exps.copy()
    result = np.ones_like(base)
    while exps.any():
        odd = (exps & 1).astype(bool)
        result[odd] = result[odd] * base[odd] % p
        base = base * base % p
        exps >>= 1
    return result
