"""Exact Fibonacci, Lucas and k-generalized Fibonacci numbers.

All values are Python integers, so nothing here ever overflows. The classical
sequence is extended to negative indices by ``F(-n) = (-1)**(n+1) * F(n)``;
k-bonacci sequences start at index ``-(k-2)`` and are not extended further.
"""

from __future__ import annotations

import copy
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IndexBelowRangeError, PrecisionExhaustedError


def _fib_pair(n: int) -> tuple[int, int]:
    """(F(n), F(n+1)) for n >= 0 by fast doubling."""
    a, b = 0, 1
    for bit in bin(n)[2:]:
        # F(2k) = F(k) (2F(k+1) - F(k)),  F(2k+1) = F(k)^2 + F(k+1)^2
        c = a * (2 * b - a)
        d = a * a + b * b
        if bit == "1":
            a, b = d, c + d
        else:
            a, b = c, d
    return a, b


def fib(n: int) -> int:
    """The n-th Fibonacci number for any integer n."""
    if n >= 0:
        return _fib_pair(n)[0]
    value = _fib_pair(-n)[0]
    return value if (-n) % 2 == 1 else -value


def fib_pair(n: int) -> tuple[int, int]:
    """(F(n), F(n+1)) for any integer n."""
    if n >= 0:
        return _fib_pair(n)
    return fib(n), fib(n + 1)


def lucas(n: int) -> int:
    """L(n) = F(n+1) + F(n-1)."""
    return fib(n + 1) + fib(n - 1)


@dataclass
class KBonacciGenerator:
    """Memoized generator of F^(k)_n, indexed from -(k-2).

    The cache is append-only. A generator is meant to be owned by one worker;
    use :meth:`copy` to hand an independent instance to another.
    """

    k: int
    _cache: list[int] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if not self._cache:
            # F_{-(k-2)} .. F_0 are zero, F_1 = 1
            self._cache = [0] * (self.k - 1) + [1]

    @property
    def offset(self) -> int:
        return self.k - 2

    @property
    def first_index(self) -> int:
        return -(self.k - 2)

    @property
    def last_index(self) -> int:
        return len(self._cache) - 1 - self.offset

    def _extend_to(self, n: int) -> None:
        cache, k = self._cache, self.k
        target = n + self.offset
        while len(cache) <= target:
            i = len(cache)
            # F_{j+1} = 2 F_j - F_{j-k} once j-k is inside the table
            if i - 1 - k >= 0:
                cache.append(2 * cache[i - 1] - cache[i - 1 - k])
            else:
                cache.append(sum(cache[max(0, i - k) : i]))

    def __getitem__(self, n: int) -> int:
        if n < self.first_index:
            raise IndexBelowRangeError(
                f"index {n} is below {self.first_index} for k={self.k}"
            )
        if n > self.last_index:
            self._extend_to(n)
        return self._cache[n + self.offset]

    def values(self, lo: int, hi: int) -> list[int]:
        """F^(k)_lo .. F^(k)_hi inclusive."""
        self[hi]
        return self._cache[lo + self.offset : hi + self.offset + 1]

    def index_of(self, value: int) -> int | None:
        """Largest n >= 1 with F^(k)_n == value, or None.

        The only repeated positive value is 1 = F_1 = F_2, reported as 2.
        """
        if value < 1:
            return None
        while self._cache[-1] < value:
            self._extend_to(self.last_index + max(16, self.last_index))
        pos = bisect_left(self._cache, value, lo=self.offset + 1)
        # first occurrence; step over duplicates to the last one
        if pos >= len(self._cache) or self._cache[pos] != value:
            return None
        while pos + 1 < len(self._cache) and self._cache[pos + 1] == value:
            pos += 1
        return pos - self.offset

    def copy(self) -> KBonacciGenerator:
        return copy.deepcopy(self)


_GENERATORS: dict[int, KBonacciGenerator] = {}


def generator(k: int) -> KBonacciGenerator:
    """A process-local shared generator for k (single-writer)."""
    gen = _GENERATORS.get(k)
    if gen is None:
        gen = _GENERATORS[k] = KBonacciGenerator(k)
    return gen


def kfib(gen: KBonacciGenerator | int, n: int) -> int:
    """F^(k)_n; ``gen`` may be a generator or the order k itself."""
    if isinstance(gen, int):
        gen = generator(gen)
    return gen[n]


def kbona_decompose(gen: KBonacciGenerator | int, n: int, ell: int) -> int:
    """Evaluate the split of F^(k)_n at position ell.

    Returns sum_{j<k} F_{ell-j} * sum_{i<k-j} F_{n-ell-i}, which equals
    F^(k)_n for every 1 <= ell <= n-1.
    """
    if isinstance(gen, int):
        gen = generator(gen)
    if n < 1 or not 1 <= ell <= n - 1:
        raise ValueError(f"need 1 <= ell <= n-1, got n={n}, ell={ell}")
    k = gen.k
    total = 0
    for j in range(k):
        inner = sum(gen[n - ell - i] for i in range(k - j))
        total += gen[ell - j] * inner
    return total


def _kpoly_sign(k: int, num: int, shift: int) -> int:
    """Sign of T^k - T^(k-1) - ... - 1 at T = num / 2**shift."""
    # scale by 2**(shift*k): num^k - sum_{i<k} num^i 2^(shift*(k-i))
    acc = num**k
    power = 1
    for i in range(k):
        acc -= power << (shift * (k - i))
        power *= num
    return (acc > 0) - (acc < 0)


def dominant_root_bracket(k: int, digits: int) -> tuple[Fraction, Fraction]:
    """Exact dyadic bracket (lo, hi) around alpha_1 with hi - lo < 10**-digits.

    Bisection on the interval (2(1 - 2^-k), 2), on which the characteristic
    polynomial changes sign exactly once.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if digits < 1:
        raise ValueError("digits must be positive")
    bits = int(digits * 3.3219280948873626) + 2
    # lo = 2 - 2^(1-k), hi = 2, represented as integers over 2^shift
    shift = k
    lo, hi = (1 << (shift + 1)) - 2, 1 << (shift + 1)
    if _kpoly_sign(k, lo, shift) >= 0 or _kpoly_sign(k, hi, shift) <= 0:
        raise PrecisionExhaustedError("characteristic polynomial bracket failed")
    while shift < bits + k:
        lo, hi, shift = 2 * lo, 2 * hi, shift + 1
        mid = (lo + hi) // 2
        sgn = _kpoly_sign(k, mid, shift)
        if sgn == 0:
            return Fraction(mid, 1 << shift), Fraction(mid, 1 << shift)
        if sgn < 0:
            lo = mid
        else:
            hi = mid
    return Fraction(lo, 1 << shift), Fraction(hi, 1 << shift)


def dominant_root(k: int, digits: int = 120):
    """The dominant root of the k-bonacci polynomial as a certified real."""
    from .analysis.hpreal import HPReal

    if digits < 20:
        raise ValueError("digits must be >= 20")
    lo, hi = dominant_root_bracket(k, digits)
    return HPReal.from_bounds(lo, hi)


def ratio_bound_check(n: int, d: int) -> bool:
    """Whether F_n / F_{n+d} <= (2/3)**d, decided in integers."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    return 3**d * fib(n) <= 2**d * fib(n + d)
