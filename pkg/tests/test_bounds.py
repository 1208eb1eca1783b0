import json

import pytest
from mpmath import mp, mpf

from fibdio.analysis.matveev import matveev_constant
from fibdio.solvers import BoundCase, bound_chain_report, family_reduction
from fibdio.solvers.bounds import fixed_point, legendre_threshold, make_step
from fibdio.solvers.types import StepStatus

# steps whose recomputed value disagrees with the published figure
EXPECTED_DISCREPANCIES = {
    BoundCase.THM2_CASE1: {
        "C(3,2)",
        "lambda per unit of n+d",
        "2 log_alpha(1.88e17)",
        "s cap log(A q / epsilon)/log(B)",
    },
    BoundCase.THM2_CASE2: {"C(3,2)", "lambda per unit of n+d"},
    BoundCase.THM2_CASE3: {"C(3,2)", "lambda per unit of n+d", "2 log_alpha(1.91e17) + 3"},
    BoundCase.THM2_CASE4: {"C(3,2)", "lambda per unit of n+d", "s cap from Legendre"},
    BoundCase.THM3: {"s < 9.44e13 n log(2n)"},
}


@pytest.fixture(scope="module")
def reports():
    return {case: bound_chain_report(case) for case in BoundCase}


def log_alpha():
    return mp.log((1 + mp.sqrt(5)) / 2)


@pytest.mark.parametrize("case", list(BoundCase))
def test_status_pattern(reports, case):
    report = reports[case]
    assert {s.name for s in report.discrepancies} == EXPECTED_DISCREPANCIES[case]
    assert all(s.status is StepStatus.PASS for s in report.steps if s.name not in EXPECTED_DISCREPANCIES[case])
    json.dumps(report.to_json())


def test_case_by_name():
    assert bound_chain_report("THM2_CASE2").case is BoundCase.THM2_CASE2
    with pytest.raises(ValueError):
        bound_chain_report("nope")


def test_matveev_figure(reports):
    c32 = reports[BoundCase.THM2_CASE1].step("C(3,2)").computed
    mp.dps = 30
    want = mpf("1.4") * mpf(30) ** 6 * mpf(3) ** mpf("4.5") * 4 * (1 + mp.log(2))
    assert abs(mpf(c32) - want) < want * mpf(10) ** -12
    assert float(matveev_constant(1, 1).mid) == 1134000


def test_case1_log_step_independent(reports):
    mp.dps = 40
    value = 2 * mp.log(mpf("1.88e17")) / log_alpha()
    step = reports[BoundCase.THM2_CASE1].step("2 log_alpha(1.88e17)")
    assert abs(step.computed - float(value)) < 1e-9
    assert 165 < value < 166


def test_case1_caps(reports):
    r = reports[BoundCase.THM2_CASE1]
    assert r.step("s cap log(A q)/log(B)").computed <= 58057
    assert r.step("s cap log(A q / epsilon)/log(B)").computed > 58057
    assert r.step("epsilon > 0 at q_99 for every n+d").computed == 1
    assert len(r.reductions) == 162


def test_case2_legendre(reports):
    r = reports[BoundCase.THM2_CASE2]
    assert r.step("s cap from Legendre").computed <= 173
    assert r.step("q_70(gamma*)").computed > 602 * 10**30
    assert r.step("max a_1..a_69(gamma*)").computed == 29


def test_case3_reduction(reports):
    r = reports[BoundCase.THM2_CASE3]
    assert r.step("log(2e61 * 1e25)/log(1.5^(1/165))").computed < 81766
    mp.dps = 40
    want = (mp.log(2) + 61 * mp.log(10) + 25 * mp.log(10)) / (mp.log(mpf("1.5")) / 165)
    assert abs(r.step("log(2e61 * 1e25)/log(1.5^(1/165))").computed - float(want)) < 1e-6


def test_case4_constants(reports):
    r = reports[BoundCase.THM2_CASE4]
    mp.dps = 30
    a = (1 + mp.sqrt(5)) / 2
    assert abs(r.step("5/alpha^2").computed - float(5 / a**2)) < 1e-12
    assert abs(r.step("alpha^-5 + 0.0764").computed - float(a**-5 + mpf("0.0764"))) < 1e-12
    assert abs(r.step("exp(0.19)").computed - float(mp.exp(mpf("0.19")))) < 1e-12
    assert r.step("s cap from Legendre").computed > 72


def test_thm3(reports):
    r = reports[BoundCase.THM3]
    assert r.step("q_54(gamma*)").computed > 221 * 10**25
    assert r.step("q_54(gamma*) above the recomputed s bound").status is StepStatus.PASS
    assert r.step("min Theta(r,s), 9 <= s < 19").computed > 0.0027
    assert r.step("index bound from the terminal minimum").computed < 26


def test_fixed_point():
    mp.dps = 60
    x = fixed_point(lambda s: 10 * mp.log(s) + 5)
    assert abs(x - 10 * mp.log(x) - 5) < x * mpf(10) ** -38


def test_legendre_threshold():
    mp.dps = 40
    a = (1 + mp.sqrt(5)) / 2

    def holds(s):
        return mpf("1.21") * a ** (-s) + mpf("2.31") / s**2 < mp.log(a) / (32 * (s - 1))

    s0 = legendre_threshold(1)
    assert s0 == 153
    assert holds(s0) and not holds(s0 - 1)
    assert all(holds(s) for s in range(s0, 5000))


def test_make_step_relations():
    assert make_step("a", 1, 2, "<", "x").status is StepStatus.PASS
    assert make_step("a", 2, 2, "<", "x").status is StepStatus.DISCREPANCY
    assert make_step("a", 2, 2, "<=", "x").status is StepStatus.PASS
    assert make_step("a", 1.04, 1, "~", "x").status is StepStatus.PASS
    assert make_step("a", 1.06, 1, "~", "x").status is StepStatus.DISCREPANCY


def test_family_reduction_deterministic():
    a = family_reduction(188 * 10**15, 165, 3, 20)
    b = family_reduction.__wrapped__(188 * 10**15, 165, 3, 20)
    key = lambda pts: [(p.nd, p.outcome.q, p.outcome.t, p.outcome.new_bound) for p in pts]
    assert key(a) == key(b)
    assert [p.nd for p in a] == list(range(3, 21))
