"""Explicit lower bounds for linear forms in logarithms (Matveev's theorem).

For positive real algebraic ``gamma_i`` in a field of degree ``ell`` and
integer exponents ``b_i`` with ``prod gamma_i**b_i != 1``::

    |prod gamma_i**b_i - 1| > (e B)**(-lambda),   B = max |b_i|,
    lambda = C(n, ell) * prod A_i,
    A_i >= max(ell h(gamma_i), |log gamma_i|, 0.16).

Only the heights needed here are provided: alpha, sqrt 5 and positive
rational integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import DegenerateFormError
from .hpreal import HPReal

A_FLOOR = Fraction(16, 100)


def matveev_constant(n: int, ell: int) -> HPReal:
    """C(n, ell) = 1.4 * 30**(n+3) * n**4.5 * ell**2 * (1 + log ell)."""
    if n < 1 or ell < 1:
        raise ValueError("n and ell must be positive")
    root_n = HPReal(n).sqrt()
    one_plus_log = HPReal(ell).log() + 1
    return HPReal(Fraction(7, 5) * 30 ** (n + 3) * n**4 * ell**2) * root_n * one_plus_log


def height_alpha() -> HPReal:
    """h(alpha) = log(alpha) / 2."""
    alpha = (HPReal(5).sqrt() + 1) / 2
    return alpha.log() / 2


def height_sqrt5() -> HPReal:
    """h(sqrt 5) = log(5) / 2: minimal polynomial x^2 - 5."""
    return HPReal(5).log() / 2


def height_integer(value: int) -> HPReal:
    """h(N) = log N for a positive integer N."""
    if value < 1:
        raise ValueError("height_integer needs a positive integer")
    return HPReal(value).log()


@dataclass(frozen=True)
class MatveevTerm:
    gamma: HPReal
    height: HPReal
    exponent: int


@dataclass(frozen=True)
class MatveevInstance:
    terms: tuple[MatveevTerm, ...]
    degree: int

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError("field degree must be positive")
        for t in self.terms:
            if not t.gamma > 0:
                raise ValueError("every gamma must be positive")

    @property
    def exponent_bound(self) -> int:
        return max(abs(t.exponent) for t in self.terms)


@dataclass(frozen=True)
class MatveevBound:
    lam: HPReal
    A: tuple[HPReal, ...]

    def log_lower_bound(self, B: int | HPReal) -> HPReal:
        """log of (e B)**(-lambda), i.e. -lambda * (1 + log B)."""
        return -self.lam * (HPReal(B).log() + 1)

    def lower_bound(self, B: int | HPReal) -> HPReal:
        return self.log_lower_bound(B).exp()


def _enclosed_max(values: Sequence[HPReal]) -> HPReal:
    lo = max(v.lower for v in values)
    hi = max(v.upper for v in values)
    return HPReal.from_bounds(lo, hi)


def a_value(term: MatveevTerm, degree: int) -> HPReal:
    """The smallest admissible A_i: max(ell h, |log gamma|, 0.16)."""
    return _enclosed_max(
        [term.height * degree, abs(term.gamma.log()), HPReal(A_FLOOR)]
    )


def matveev_lambda(inst: MatveevInstance) -> MatveevBound:
    if not inst.terms or all(t.exponent == 0 for t in inst.terms):
        raise DegenerateFormError("all exponents are zero; the form is identically 1")
    a_values = tuple(a_value(t, inst.degree) for t in inst.terms)
    lam = matveev_constant(len(inst.terms), inst.degree)
    for a in a_values:
        lam = lam * a
    return MatveevBound(lam, a_values)
