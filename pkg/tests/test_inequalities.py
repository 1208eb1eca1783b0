import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from fibdio.analysis.inequalities import (
    alpha_power_gap,
    binet_power_error,
    fib_bracket_exact,
    nonvanishing_check,
    nonvanishing_value,
    sqrt5_rational_gap,
)
from fibdio.errors import ExceptionalPairError, ExcludedParameterError
from fibdio.sequences import fib


def mp_alpha():
    return (1 + mp.sqrt(5)) / 2


class TestSqrt5Gap:
    def test_examples(self):
        assert sqrt5_rational_gap(2, 1)
        assert sqrt5_rational_gap(9, 4)
        assert sqrt5_rational_gap(0, 1)

    def test_grid_all_hold(self):
        for q in range(1, 400):
            for p in range(0, 3 * q):
                assert sqrt5_rational_gap(p, q)

    @settings(max_examples=300)
    @given(st.integers(0, 10**12), st.integers(1, 10**12))
    def test_agrees_with_mpmath(self, p, q):
        mp.dps = 80
        gap = abs(q * mp.sqrt(5) - p)
        assert sqrt5_rational_gap(p, q) == (gap >= mpf(1) / (6 * q))

    def test_at_convergents(self):
        # the sharpest cases are the convergents of sqrt5
        p0, p1, q0, q1 = 1, 2, 0, 1
        for _ in range(60):
            p0, p1 = p1, 4 * p1 + p0
            q0, q1 = q1, 4 * q1 + q0
            assert sqrt5_rational_gap(p1, q1)


class TestAlphaPowerGap:
    def test_examples(self):
        assert alpha_power_gap(1, 1)
        assert alpha_power_gap(4, 3)
        assert alpha_power_gap(2, 5)

    def test_excluded(self):
        for s in (2, 4):
            with pytest.raises(ExcludedParameterError):
                alpha_power_gap(3, s)

    def test_grid(self):
        for n in range(1, 150):
            for s in list(range(1, 40)):
                if s not in (2, 4):
                    assert alpha_power_gap(n, s)

    def test_agrees_with_mpmath(self):
        mp.dps = 120
        a = mp_alpha()
        for n in range(1, 80):
            for s in (1, 3, 5, 6, 7, 9, 12):
                lhs = abs(a**n - mp.sqrt(5) ** (s - 1))
                rhs = 1 - (a - 1) ** n
                if abs(lhs - rhs) < mpf(10) ** -100:
                    # a tie, e.g. (3, 3): both sides equal 3 - sqrt5
                    assert alpha_power_gap(n, s)
                else:
                    assert alpha_power_gap(n, s) == (lhs > rhs)

    def test_tight_case(self):
        from fibdio.golden import ALPHA, BETA, sqrt5_power

        assert abs(ALPHA**3 - sqrt5_power(2)) == 1 - abs(BETA) ** 3


class TestBinetPowerError:
    def test_examples(self):
        assert binet_power_error(3, 2).bound2pow
        assert binet_power_error(1, 1).bound2pow
        # alpha^1 > 1 = s, so the 2s bound is claimed too: 0.618 < 2 / alpha
        assert binet_power_error(1, 1).bound2s
        # n <= log_alpha(s): only the 2^s bound applies
        assert binet_power_error(2, 5).bound2s is None
        out = binet_power_error(10, 3)
        assert out.bound2pow and out.bound2s

    def test_grid(self):
        mp.dps = 50
        a = mp_alpha()
        for n in range(1, 60):
            for s in range(1, 25):
                out = binet_power_error(n, s)
                assert out.bound2pow
                if n > mp.log(s) / mp.log(a):
                    assert out.bound2s
                else:
                    assert out.bound2s is None

    def test_agrees_with_mpmath(self):
        mp.dps = 300
        a = mp_alpha()
        for n, s in [(3, 2), (5, 7), (12, 4), (20, 9)]:
            err = abs((fib(n) * mp.sqrt(5)) ** s - a ** (n * s))
            assert (err < 2**s * a ** (n * (s - 2))) == binet_power_error(n, s).bound2pow


class TestNonvanishing:
    def test_examples(self):
        with pytest.raises(ExceptionalPairError):
            nonvanishing_check(1, 2, 1)
        assert nonvanishing_check(3, 3, 1)
        with pytest.raises(ExceptionalPairError):
            nonvanishing_check(0, 1, 2)

    def test_the_exceptional_pair_vanishes(self):
        # 1 + alpha^2 = alpha sqrt5
        assert nonvanishing_value(1, 2, 1) == 0

    def test_grid(self):
        for n in range(-20, 120):
            for s in range(2, 20):
                for d in range(1, 8):
                    if (s, d) != (2, 1):
                        assert nonvanishing_check(n, s, d)

    def test_value_against_mpmath(self):
        mp.dps = 60
        a = mp_alpha()
        for n, s, d in [(3, 3, 1), (7, 5, 2), (-4, 6, 3)]:
            want = 1 + a ** (s * d) - a**n * mp.sqrt(5) ** (s - 1)
            assert abs(float(nonvanishing_value(n, s, d)) - want) < 1e-6 * max(1, abs(want))


class TestFibBracket:
    def test_range(self):
        for n in range(3, 501):
            assert fib_bracket_exact(n) == (True, True)

    def test_against_mpmath(self):
        mp.dps = 200
        a = mp_alpha()
        for n in range(3, 200, 7):
            assert a ** (n - mpf(7) / 4) < fib(n) < a ** (n - mpf(3) / 2)

    def test_fails_below_range(self):
        # n = 2: alpha^(1/4) < 1 fails; n = 1: 1 < alpha^(-1/2) fails
        assert fib_bracket_exact(2) == (False, True)
        assert fib_bracket_exact(1) == (True, False)
