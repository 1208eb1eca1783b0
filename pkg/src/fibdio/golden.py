"""Exact arithmetic in the quadratic field Q(sqrt 5).

Every quantity built from alpha = (1 + sqrt 5)/2, beta = -1/alpha, sqrt 5 and
rationals lives in this field, so signs and comparisons among them can be
decided without any floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

Number = Union[int, Fraction, "QSqrt5"]


def _sign_of_surd(a: Fraction, b: Fraction) -> int:
    # sign of a + b*sqrt5
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with 5 b^2
    lhs, rhs = a * a, 5 * b * b
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


@dataclass(frozen=True, slots=True)
class QSqrt5:
    """The number ``a + b*sqrt(5)`` with rational ``a`` and ``b``."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def alpha(cls) -> QSqrt5:
        return cls(Fraction(1, 2), Fraction(1, 2))

    @classmethod
    def beta(cls) -> QSqrt5:
        return cls(Fraction(1, 2), Fraction(-1, 2))

    @classmethod
    def sqrt5(cls) -> QSqrt5:
        return cls(Fraction(0), Fraction(1))

    @staticmethod
    def _coerce(other: Number) -> QSqrt5:
        if isinstance(other, QSqrt5):
            return other
        if isinstance(other, (int, Fraction)):
            return QSqrt5(Fraction(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Number) -> QSqrt5:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt5(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> QSqrt5:
        return QSqrt5(-self.a, -self.b)

    def __sub__(self, other: Number) -> QSqrt5:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt5(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: Number) -> QSqrt5:
        return -self + other

    def __mul__(self, other: Number) -> QSqrt5:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt5(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> QSqrt5:
        return QSqrt5(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 5 * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> QSqrt5:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt5)")
        c = self.conjugate()
        return QSqrt5(c.a / n, c.b / n)

    def __truediv__(self, other: Number) -> QSqrt5:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, e: int) -> QSqrt5:
        if e < 0:
            return self.inverse() ** (-e)
        result = QSqrt5(Fraction(1))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def sign(self) -> int:
        return _sign_of_surd(self.a, self.b)

    def __abs__(self) -> QSqrt5:
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return self.sign() != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QSqrt5(Fraction(other))
        if not isinstance(other, QSqrt5):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __lt__(self, other: Number) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: Number) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: Number) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: Number) -> bool:
        return (self - other).sign() >= 0

    def floor(self) -> int:
        """Exact floor, via integer square roots."""
        # a + b*sqrt5 = (num + sgn*sqrt(D)) / den with integers
        den = self.a.denominator * self.b.denominator
        num = self.a.numerator * self.b.denominator
        coef = self.b.numerator * self.a.denominator
        root = isqrt(5 * coef * coef)  # floor(|coef| sqrt 5)
        exact = root * root == 5 * coef * coef  # only when coef == 0
        if coef >= 0:
            return (num + root) // den
        # num - |coef|sqrt5: floor of -(x) is -ceil(x)
        ceil_root = root if exact else root + 1
        return (num - ceil_root) // den

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 5 ** 0.5

    def __repr__(self) -> str:
        return f"QSqrt5({self.a}, {self.b})"


ALPHA = QSqrt5.alpha()
BETA = QSqrt5.beta()
SQRT5 = QSqrt5.sqrt5()


def sqrt5_power(e: int) -> QSqrt5:
    """sqrt(5)**e as an exact field element (e may be negative)."""
    if e >= 0:
        half, odd = divmod(e, 2)
        return QSqrt5(Fraction(0), Fraction(5**half)) if odd else QSqrt5(Fraction(5**half))
    return sqrt5_power(-e).inverse()
