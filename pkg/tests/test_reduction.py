from fractions import Fraction

import pytest
from mpmath import mp, mpf

from fibdio.analysis.contfrac import cf_expand, convergents
from fibdio.analysis.hpreal import HPReal, hp_const, working_digits
from fibdio.analysis.reduction import ReductionInstance, dp_reduce, epsilon_at
from fibdio.errors import NoPositiveEpsilonError
from fibdio.sequences import fib


def family_instance(nd, M, b_exponent, digits=220):
    with working_digits(digits):
        log_fib = HPReal(fib(nd)).log()
        gamma = hp_const("log-alpha", digits) / log_fib
        mu = -hp_const("log-sqrt5", digits) / log_fib
        B = ((HPReal(3) / 2).log() / b_exponent).exp()
    return ReductionInstance(gamma, mu, 2, B, M)


def mp_distance(x):
    return abs(x - mp.nint(x))


class TestInstance:
    def test_validation(self):
        g = hp_const("gamma-star")
        with pytest.raises(ValueError):
            ReductionInstance(g, g, 2, 1, 10)
        with pytest.raises(ValueError):
            ReductionInstance(g, g, 2, 2, 0)
        with pytest.raises(ValueError):
            ReductionInstance(g, g, 0, 2, 10)


class TestReduce:
    @pytest.mark.parametrize("nd", [3, 4, 20, 100, 164])
    def test_epsilon_against_mpmath(self, nd):
        inst = family_instance(nd, 188 * 10**15, 165)
        out = dp_reduce(inst, 98)
        mp.dps = 250
        log_f = mp.log(fib(nd))
        gamma = mp.log((1 + mp.sqrt(5)) / 2) / log_f
        mu = -mp.log(mp.sqrt(5)) / log_f
        eps = mp_distance(mu * out.q) - inst.M * mp_distance(gamma * out.q)
        assert out.epsilon.lower <= Fraction(mp.nstr(eps, 200)) + Fraction(1, 10**150)
        assert abs(out.epsilon.mid - eps) < mpf(10) ** -100
        assert eps > 0
        B = mp.power(mpf(3) / 2, mpf(1) / 165)
        assert out.new_bound == int(mp.ceil(mp.log(2 * out.q / eps) / mp.log(B)))
        assert out.bound_without_epsilon == int(mp.ceil(mp.log(2 * out.q) / mp.log(B)))

    def test_skips_small_denominators(self):
        inst = family_instance(10, 10**6, 165)
        out = dp_reduce(inst)
        assert out.q > 6 * inst.M
        assert out.new_bound >= out.bound_without_epsilon

    def test_bound_at_least_minimal(self):
        inst = family_instance(50, 10**10, 165)
        out = dp_reduce(inst)
        floor_bound = (HPReal(2 * 6 * inst.M).log() / HPReal(inst.B).log()).lower
        assert out.new_bound >= floor_bound

    def test_nonpositive_epsilon_moves_on(self):
        # mu = 0 makes ||mu q|| = 0, so epsilon < 0 for every q
        gamma = hp_const("gamma-star", 200)
        inst = ReductionInstance(gamma, HPReal(0), 2, 2, 5)
        with pytest.raises(NoPositiveEpsilonError):
            dp_reduce(inst, 0, cf_expand(gamma, 60))

    def test_epsilon_formula(self):
        inst = family_instance(7, 1000, 165)
        q = convergents(cf_expand(inst.gamma))[30].q
        eps = epsilon_at(inst, q)
        direct = (inst.mu * q).dist_to_int() - (inst.gamma * q).dist_to_int() * 1000
        assert eps.lower == direct.lower and eps.upper == direct.upper
