from fractions import Fraction

import pytest
from mpmath import mp, mpf

from fibdio.analysis.hpreal import HPReal, hp_const
from fibdio.analysis.matveev import (
    A_FLOOR,
    MatveevInstance,
    MatveevTerm,
    a_value,
    height_alpha,
    height_integer,
    height_sqrt5,
    matveev_constant,
    matveev_lambda,
)
from fibdio.errors import DegenerateFormError
from fibdio.sequences import fib


def mp_constant(n, ell):
    mp.dps = 50
    return mpf("1.4") * mpf(30) ** (n + 3) * mpf(n) ** mpf("4.5") * ell**2 * (1 + mp.log(ell))


def test_c11_exact():
    c = matveev_constant(1, 1)
    assert c.lower == c.upper == 1134000


@pytest.mark.parametrize("n,ell", [(1, 1), (2, 2), (3, 2), (3, 3), (4, 6)])
def test_constant_against_mpmath(n, ell):
    c = matveev_constant(n, ell)
    assert abs(c.mid - mp_constant(n, ell)) < mp_constant(n, ell) * mpf(10) ** -40


def test_constant_scales():
    assert matveev_constant(3, 2) < 10**12
    assert matveev_constant(2, 2) < 10**10
    # far from the 3.4e9 figure sometimes quoted for C(3,2)
    assert matveev_constant(3, 2) > 100 * Fraction(34, 10) * 10**8


def test_heights():
    mp.dps = 50
    assert abs(height_alpha().mid - mp.log((1 + mp.sqrt(5)) / 2) / 2) < mpf(10) ** -40
    assert abs(height_sqrt5().mid - mp.log(5) / 2) < mpf(10) ** -40
    assert abs(height_integer(fib(20)).mid - mp.log(fib(20))) < mpf(10) ** -40
    with pytest.raises(ValueError):
        height_integer(0)


def test_a_values_for_the_two_power_form():
    alpha = MatveevTerm(hp_const("alpha"), height_alpha(), 5)
    sqrt5 = MatveevTerm(hp_const("sqrt5"), height_sqrt5(), -1)
    a1, a2 = a_value(alpha, 2), a_value(sqrt5, 2)
    mp.dps = 30
    assert abs(a1.mid - mp.log((1 + mp.sqrt(5)) / 2)) < mpf(10) ** -25  # 0.4812 <= 0.5
    assert a1 < Fraction(1, 2)
    assert abs(a2.mid - mp.log(5)) < mpf(10) ** -25  # 1.609 <= 1.61
    assert a2 < Fraction(161, 100)


def test_floor_applies():
    term = MatveevTerm(HPReal(Fraction(101, 100)), HPReal(Fraction(1, 100)), 1)
    a = a_value(term, 1)
    assert a.lower <= A_FLOOR <= a.upper
    assert a.radius < Fraction(1, 10**100)


def test_lambda_three_terms():
    nd = 30
    terms = (
        MatveevTerm(hp_const("alpha"), height_alpha(), 40),
        MatveevTerm(hp_const("sqrt5"), height_sqrt5(), -1),
        MatveevTerm(HPReal(fib(nd)), height_integer(fib(nd)), -2),
    )
    bound = matveev_lambda(MatveevInstance(terms, 2))
    expected = matveev_constant(3, 2) * bound.A[0] * bound.A[1] * bound.A[2]
    assert abs(bound.lam - expected).upper < Fraction(1, 10**20) * expected.upper
    # A_3 = 2 log F_nd <= 2 (nd - 1) log(alpha)
    assert bound.A[2] < hp_const("log-alpha") * 2 * (nd - 1)
    assert MatveevInstance(terms, 2).exponent_bound == 40
    log_lb = bound.log_lower_bound(40)
    assert abs(log_lb + bound.lam * (HPReal(40).log() + 1)).upper < Fraction(1, 10**20) * bound.lam.upper


def test_two_term_coefficient():
    # the coefficient used for |alpha^a sqrt5^b - 1| forms: C(2,2) * 0.5 * 1.61
    coef = matveev_constant(2, 2) * Fraction(1, 2) * Fraction(161, 100)
    mp.dps = 30
    assert abs(coef.mid - mpf("0.805") * mp_constant(2, 2)) < mpf(10) ** -10


def test_degenerate():
    terms = (MatveevTerm(hp_const("alpha"), height_alpha(), 0),)
    with pytest.raises(DegenerateFormError):
        matveev_lambda(MatveevInstance(terms, 2))


def test_rejects_nonpositive_gamma():
    with pytest.raises(ValueError):
        MatveevInstance((MatveevTerm(HPReal(-2), HPReal(1), 1),), 1)
