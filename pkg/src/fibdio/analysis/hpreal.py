"""Certified high-precision reals backed by mpmath interval arithmetic.

An :class:`HPReal` is a closed interval guaranteed to contain the true value.
mpmath rounds every endpoint outward, so error radii propagate conservatively
through arithmetic, logarithms, roots and powers.

Comparisons are certified: ``x < y`` is True or False only when the intervals
decide it, and raises :class:`IndeterminateError` when they overlap.
"""

from __future__ import annotations

import enum
import math
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

from mpmath import iv, mp, mpf
from mpmath.libmp import to_rational

from ..errors import IndeterminateError, PrecisionExhaustedError

DEFAULT_DIGITS = 120
GUARD_DIGITS = 40

_BITS_PER_DIGIT = 3.3219280948873626

Real = Union["HPReal", int, Fraction, str]


_state = {"bits": int((DEFAULT_DIGITS + GUARD_DIGITS) * _BITS_PER_DIGIT) + 8}


def _digits_to_bits(digits: int) -> int:
    return int(digits * _BITS_PER_DIGIT) + 8


def current_bits() -> int:
    return _state["bits"]


@contextmanager
def working_digits(digits: int) -> Iterator[None]:
    """Temporarily set the precision of newly created values (decimal digits).

    Never lowers the precision, so nested blocks keep the widest setting.
    """
    saved = _state["bits"]
    _state["bits"] = max(saved, _digits_to_bits(digits))
    try:
        yield
    finally:
        _state["bits"] = saved


@contextmanager
def _iv_at(bits: int) -> Iterator[None]:
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def _raw_to_fraction(raw) -> Fraction:
    p, q = to_rational(raw)
    return Fraction(int(p), int(q))


class HPReal:
    """A real number known to lie in ``[lower, upper]``.

    Each value remembers the binary precision it was built at; operations
    run at the widest precision among their operands and the ambient
    :func:`working_digits` setting.
    """

    __slots__ = ("_iv", "_bits")

    def __init__(self, value: Real, bits: int | None = None) -> None:
        if bits is None:
            bits = getattr(value, "_bits", None) or current_bits()
        self._bits = bits
        if isinstance(value, HPReal):
            self._iv = value._iv
            return
        with _iv_at(bits):
            if isinstance(value, Fraction):
                self._iv = iv.mpf(value.numerator) / iv.mpf(value.denominator)
            elif isinstance(value, (int, str)):
                self._iv = iv.mpf(value)
            elif isinstance(value, iv.mpf):
                self._iv = value
            else:
                raise TypeError(f"cannot build HPReal from {type(value).__name__}")

    @classmethod
    def from_bounds(cls, lo: Fraction | int, hi: Fraction | int) -> HPReal:
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("lower bound exceeds upper bound")
        bits = current_bits()
        lo_iv = HPReal(lo, bits)._iv
        hi_iv = HPReal(hi, bits)._iv
        with _iv_at(bits):
            return cls(iv.mpf([lo_iv.a, hi_iv.b]), bits)

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def digits(self) -> int:
        return int(self._bits / _BITS_PER_DIGIT)

    def _lift(self, fn, *others: "HPReal") -> HPReal:
        bits = max([self._bits, current_bits()] + [o._bits for o in others])
        with _iv_at(bits):
            return HPReal(fn(), bits)

    # -- inspection --------------------------------------------------------

    @property
    def interval(self):
        return self._iv

    @property
    def lower(self) -> Fraction:
        return _raw_to_fraction(self._iv._mpi_[0])

    @property
    def upper(self) -> Fraction:
        return _raw_to_fraction(self._iv._mpi_[1])

    @property
    def mid(self) -> mpf:
        with mp.workprec(self._bits + 16):
            return (mpf(self._iv.a) + mpf(self._iv.b)) / 2

    @property
    def radius(self) -> Fraction:
        return (self.upper - self.lower) / 2

    def contains(self, x: Real) -> bool:
        other = _as_hp(x)
        return self.lower <= other.lower and other.upper <= self.upper

    def certified_digits(self) -> int:
        """Decimal digits after the point guaranteed by the radius."""
        r = self.radius
        if r == 0:
            return self.digits
        if r >= 1:
            return 0
        return max(0, math.floor(-math.log10(r)) - 1)

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"HPReal({self})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self, digits: int | None = None) -> str:
        """Fixed-point decimal showing only digits shared by both endpoints.

        Both endpoints are truncated toward zero; the widest fraction length
        (at most ``digits``) on which they agree is printed.
        """
        lo, hi = self.lower, self.upper
        if lo == hi and lo.denominator == 1:
            return str(lo.numerator)
        width = self.certified_digits() + 2
        if digits is not None:
            width = min(width, digits)
        while True:
            scale = 10**width
            a, b = math.trunc(lo * scale), math.trunc(hi * scale)
            if a == b or width == 0:
                break
            width -= 1
        if a != b:
            return "?"
        negative = a < 0 or (a == 0 and hi < 0)
        text = str(abs(a)).rjust(width + 1, "0")
        body = text[:-width] + "." + text[-width:] if width else text
        return ("-" if negative else "") + body

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: Real) -> HPReal:
        o = _as_hp(other)
        return self._lift(lambda: self._iv + o._iv, o)

    __radd__ = __add__

    def __sub__(self, other: Real) -> HPReal:
        o = _as_hp(other)
        return self._lift(lambda: self._iv - o._iv, o)

    def __rsub__(self, other: Real) -> HPReal:
        return _as_hp(other) - self

    def __mul__(self, other: Real) -> HPReal:
        o = _as_hp(other)
        return self._lift(lambda: self._iv * o._iv, o)

    __rmul__ = __mul__

    def __truediv__(self, other: Real) -> HPReal:
        o = _as_hp(other)
        if o.lower <= 0 <= o.upper:
            raise IndeterminateError("division by an interval containing zero")
        return self._lift(lambda: self._iv / o._iv, o)

    def __rtruediv__(self, other: Real) -> HPReal:
        return _as_hp(other) / self

    def __neg__(self) -> HPReal:
        return self._lift(lambda: -self._iv)

    def __abs__(self) -> HPReal:
        lo, hi = self.lower, self.upper
        if lo >= 0:
            return self
        if hi <= 0:
            return -self
        with _iv_at(self._bits):
            top = max(-self._iv.a, self._iv.b).b
            return HPReal(iv.mpf([0, top]), self._bits)

    def __pow__(self, e: Real) -> HPReal:
        if isinstance(e, int):
            if e < 0:
                return HPReal(1, self._bits) / (self ** (-e))
            result = HPReal(1, self._bits)
            base = self
            while e:
                if e & 1:
                    result = result * base
                base = base * base
                e >>= 1
            return result
        return (_as_hp(e) * self.log()).exp()

    def log(self) -> HPReal:
        if self.lower <= 0:
            raise IndeterminateError("log of an interval reaching zero")
        return self._lift(lambda: iv.log(self._iv))

    def exp(self) -> HPReal:
        return self._lift(lambda: iv.exp(self._iv))

    def sqrt(self) -> HPReal:
        if self.lower < 0:
            raise IndeterminateError("sqrt of an interval reaching below zero")
        return self._lift(lambda: iv.sqrt(self._iv))

    # -- certified decisions -----------------------------------------------

    def sign(self) -> int:
        lo, hi = self.lower, self.upper
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if lo == hi == 0:
            return 0
        raise IndeterminateError(f"sign undecided for [{float(lo)}, {float(hi)}]")

    def _cmp(self, other: Real) -> int:
        return (self - _as_hp(other)).sign()

    def __lt__(self, other: Real) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Real) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Real) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Real) -> bool:
        return self._cmp(other) >= 0

    def floor(self) -> int:
        lo, hi = math.floor(self.lower), math.floor(self.upper)
        if lo != hi:
            raise IndeterminateError("floor undecided; raise precision")
        return lo

    def ceil(self) -> int:
        lo, hi = math.ceil(self.lower), math.ceil(self.upper)
        if lo != hi:
            raise IndeterminateError("ceil undecided; raise precision")
        return lo

    def upper_ceil(self) -> int:
        """Smallest integer not below any point of the interval."""
        return math.ceil(self.upper)

    def dist_to_int(self) -> HPReal:
        """Enclosure of ``||x||``, the distance to the nearest integer.

        ``||x||`` is continuous, so half-integers inside the interval are
        harmless; only the enclosure width matters.
        """
        lo, hi = self.lower, self.upper
        n = math.floor(lo)
        if hi > n + 1:
            # spans a whole unit: anything in [0, 1/2]
            return HPReal.from_bounds(0, Fraction(1, 2))

        # on [n, n+1] the function is min(x-n, n+1-x), a tent peaking at n+1/2
        def tent(x: Fraction) -> Fraction:
            return min(x - n, n + 1 - x)

        lo_v, hi_v = tent(lo), tent(hi)
        low = min(lo_v, hi_v)
        high = Fraction(1, 2) if lo <= n + Fraction(1, 2) <= hi else max(lo_v, hi_v)
        with working_digits(self.digits):
            return HPReal.from_bounds(low, high)


def _int_digits(x: mpf) -> int:
    if x == 0:
        return 1
    return max(1, int(mp.floor(mp.log10(abs(x)))) + 1)


def _as_hp(x: Real) -> HPReal:
    return x if isinstance(x, HPReal) else HPReal(x)


class Constant(str, enum.Enum):
    ALPHA = "alpha"
    BETA_ABS = "beta-abs"
    SQRT5 = "sqrt5"
    LOG_ALPHA = "log-alpha"
    LOG_SQRT5 = "log-sqrt5"
    GAMMA_STAR = "gamma-star"


def _build_constant(name: Constant) -> HPReal:
    sqrt5 = HPReal(5).sqrt()
    alpha = (sqrt5 + 1) / 2
    if name is Constant.ALPHA:
        return alpha
    if name is Constant.BETA_ABS:
        return (sqrt5 - 1) / 2
    if name is Constant.SQRT5:
        return sqrt5
    if name is Constant.LOG_ALPHA:
        return alpha.log()
    if name is Constant.LOG_SQRT5:
        return sqrt5.log()
    if name is Constant.GAMMA_STAR:
        return sqrt5.log() / alpha.log()
    raise ValueError(name)


@lru_cache(maxsize=256)
def _hp_const_cached(name: Constant, digits: int) -> HPReal:
    with working_digits(digits + GUARD_DIGITS):
        value = _build_constant(name)
    if value.radius > Fraction(1, 10**digits):
        raise PrecisionExhaustedError(
            f"{name.value} not certified to {digits} digits", needed_digits=2 * digits
        )
    return value


def hp_const(name: Constant | str, digits: int = DEFAULT_DIGITS) -> HPReal:
    """A named constant, certified to within 10**-digits."""
    if digits < 20:
        raise ValueError("digits must be >= 20")
    return _hp_const_cached(Constant(name), digits)
