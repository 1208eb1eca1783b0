"""Search pipelines for the four equations.

Each pipeline sieves its box with a Pisano filter chain (or, for k >= 3,
looks values up directly), confirms survivors with exact integers and
returns a :class:`TheoremReport`.
"""

from __future__ import annotations

import time
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence

from ..golden import ALPHA, QSqrt5, sqrt5_power
from ..modular import DEFAULT_PRIMES, confirm_exact
from ..sequences import KBonacciGenerator, fib
from .ranges import DEFAULT_S_NUMERATOR, m_range, m_range_consecutive, s_cap
from .sieve import (
    _chain,
    consecutive_block,
    power_table,
    squares_block,
    two_powers_block,
)
from .types import (
    EquationKind,
    EquationSpec,
    FamilyRecord,
    SieveStats,
    Solution,
    TheoremReport,
)

SQUARES_FAMILY = "(n,1,2n+1)"
TWO_POWERS_SQUARE_FAMILY = "(n,1,2,2n+1)"
TWO_POWERS_FAMILY = "(1,1,s,3)"


def _merge(stats: Iterable[SieveStats], moduli: tuple[int, ...]) -> SieveStats:
    total = SieveStats(moduli=moduli)
    for s in stats:
        total = total.merge(s)
    return total


def _family_record(pattern: str, parameter: str, members: Sequence[int]) -> FamilyRecord:
    return FamilyRecord(pattern, parameter, min(members), max(members), len(members))


# -- squares, k = 2 ---------------------------------------------------------


def solve_squares_k2(
    n_max: int = 200,
    d_max: int | None = None,
    primes: tuple[int, ...] = DEFAULT_PRIMES,
) -> TheoremReport:
    """All (n, d, m) with F_n^2 + F_{n+d}^2 = F_m, 1 <= n <= n_max, 0 <= d <= d_max."""
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    d_max = n_max if d_max is None else d_max
    start = time.perf_counter()
    spec = EquationSpec(EquationKind.SQUARES_K2, (1, n_max), (0, d_max))
    survivors, stats = squares_block(1, n_max, 0, d_max, tuple(primes))

    solutions = []
    for n, d in sorted(survivors):
        value = fib(n) ** 2 + fib(n + d) ** 2
        m = confirm_exact(value)
        if m is None:
            continue
        family = SQUARES_FAMILY if d == 1 and m == 2 * n + 1 else None
        solutions.append(Solution(n, d, 2, m, value, family))

    report = TheoremReport(spec, solutions, sieve=stats)
    members = [s.n for s in solutions if s.family == SQUARES_FAMILY]
    missing = [n for n in range(1, n_max + 1) if n not in set(members)]
    if missing:
        raise AssertionError(f"family (n,1,2n+1) fails for n in {missing[:5]}")
    report.families.append(_family_record(SQUARES_FAMILY, "n", members))
    report.checks["sandwich"] = _squares_sandwich_k2(n_max, d_max)
    report.duration_ms = (time.perf_counter() - start) * 1000
    return report


def _squares_sandwich_k2(n_max: int, d_max: int) -> dict[str, int]:
    """F_{2n+2d-2} < F_n^2 + F_{n+d}^2 < F_{2n+2d-1} for n > 2, d >= 2."""
    checked = violations = 0
    for n in range(3, n_max + 1):
        for d in range(2, d_max + 1):
            value = fib(n) ** 2 + fib(n + d) ** 2
            checked += 1
            if not fib(2 * n + 2 * d - 2) < value < fib(2 * n + 2 * d - 1):
                violations += 1
    return {"checked": checked, "violations": violations}


# -- squares, k >= 3 ----------------------------------------------------------


def solve_squares_k(k: int, n_max: int = 60) -> TheoremReport:
    """All (n, d, m) with (F^(k)_n)^2 + (F^(k)_{n+d})^2 = F^(k)_m and n + d <= n_max.

    The k-bonacci Pisano periods are long, so values are looked up exactly
    instead of being sieved.
    """
    if k < 3:
        raise ValueError("k must be >= 3")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    start = time.perf_counter()
    spec = EquationSpec(EquationKind.SQUARES_K, (1, n_max), (0, n_max - 1), nd_max=n_max, k=k)
    gen = KBonacciGenerator(k)
    seq = gen.values(0, 2 * n_max + 2)
    stats = SieveStats()
    solutions = []
    checked = violations = 0
    for n in range(1, n_max + 1):
        for d in range(0, n_max - n + 1):
            value = seq[n] ** 2 + seq[n + d] ** 2
            stats.candidates += 1
            m = gen.index_of(value)
            if m is not None:
                solutions.append(Solution(n, d, 2, m, value))
            if d >= 1 and n + d > 3:
                checked += 1
                lo, hi = 2 * n + 2 * d - 2, 2 * n + 2 * d - 1
                if not gen[lo] < value < gen[hi]:
                    violations += 1
    stats.survivors = stats.candidates
    report = TheoremReport(spec, solutions, sieve=stats)
    report.checks["sandwich"] = {"checked": checked, "violations": violations}
    report.duration_ms = (time.perf_counter() - start) * 1000
    return report


def expected_squares_k(k: int) -> set[tuple[int, int, int]]:
    """The published solution set for k >= 3."""
    out = {(1, 0, 3), (1, 1, 3)}
    out |= {(a, 0, 2 * a - 1) for a in range(2, (k + 2) // 2 + 1)}
    return out


# -- two s-th powers ----------------------------------------------------------


def _two_powers_shard(args) -> tuple[list[tuple[int, int, int]], SieveStats]:
    nds, n_min, d_min, s_min, s_max_rule, primes = args
    chain = _chain(primes)
    top = max(s_max_rule[nd] for nd in nds)
    for filt in chain.filters:
        power_table(filt, top)
    survivors: list[tuple[int, int, int]] = []
    stats = SieveStats(moduli=chain.moduli)
    for nd in nds:
        found, st = two_powers_block(nd, n_min, d_min, s_min, s_max_rule[nd], primes)
        survivors.extend(found)
        stats = stats.merge(st)
    return survivors, stats


def _shards(items: list[int], weights: dict[int, int], workers: int) -> list[list[int]]:
    """Greedy balanced partition by weight, each shard sorted ascending."""
    bins: list[list[int]] = [[] for _ in range(workers)]
    loads = [0] * workers
    for item in sorted(items, key=lambda i: -weights[i]):
        j = loads.index(min(loads))
        bins[j].append(item)
        loads[j] += weights[item]
    return [sorted(b) for b in bins if b]


def solve_two_powers(
    nd_max: int = 168,
    s_numerator: int = DEFAULT_S_NUMERATOR,
    s_floor: int = 3,
    s_min: int = 2,
    s_max: int | None = None,
    d_min: int = 1,
    primes: tuple[int, ...] = DEFAULT_PRIMES,
    workers: int = 1,
) -> TheoremReport:
    """All (n, d, s, m) with F_n^s + F_{n+d}^s = F_m in the box

    2 <= n + d <= nd_max, n >= 1, d >= d_min, s_min <= s <= cap(n + d),
    where cap(N) = max(s_floor, s_numerator // (N - 1)), optionally
    clipped to ``s_max``.
    """
    if nd_max < 4:
        raise ValueError("nd_max must be >= 4")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    start = time.perf_counter()
    primes = tuple(primes)
    nd_lo = 1 + max(d_min, 1)
    rule = {}
    for nd in range(nd_lo, nd_max + 1):
        cap = s_cap(nd, s_numerator, s_floor)
        rule[nd] = cap if s_max is None else min(cap, s_max)
    spec = EquationSpec(
        EquationKind.TWO_POWERS,
        (1, nd_max - d_min),
        (d_min, nd_max - 1),
        (s_min, max(rule.values())),
        nd_max=nd_max,
    )
    nds = list(rule)
    weights = {nd: (nd - d_min) * max(rule[nd] - s_min + 1, 0) for nd in nds}
    shards = _shards(nds, weights, workers)
    tasks = [(shard, 1, d_min, s_min, rule, primes) for shard in shards]
    if workers == 1 or len(tasks) == 1:
        results = [_two_powers_shard(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_two_powers_shard, tasks))

    moduli = _chain(primes).moduli
    stats = _merge((r[1] for r in results), moduli)
    survivors = sorted(t for r in results for t in r[0])

    solutions = []
    for n, d, s in survivors:
        value = fib(n) ** s + fib(n + d) ** s
        m = confirm_exact(value)
        if m is None:
            continue
        lo, hi = m_range(n, d, s)
        if not lo <= m <= hi:
            raise AssertionError(f"m={m} outside [{lo}, {hi}] for {(n, d, s)}")
        if s >= 3 and (n, d, m) == (1, 1, 3):
            family = TWO_POWERS_FAMILY
        elif s == 2 and d == 1 and m == 2 * n + 1:
            family = TWO_POWERS_SQUARE_FAMILY
        else:
            family = None
        solutions.append(Solution(n, d, s, m, value, family))

    report = TheoremReport(spec, solutions, sieve=stats)
    for pattern, param, key in (
        (TWO_POWERS_SQUARE_FAMILY, "n", lambda x: x.n),
        (TWO_POWERS_FAMILY, "s", lambda x: x.s),
    ):
        members = [key(x) for x in solutions if x.family == pattern]
        if members:
            report.families.append(_family_record(pattern, param, members))
    report.duration_ms = (time.perf_counter() - start) * 1000
    return report


# -- consecutive s-th powers ----------------------------------------------------


TERMINAL_INDEX_BOUND = 26


def terminal_box(index_bound: int = TERMINAL_INDEX_BOUND) -> tuple[list[Solution], int]:
    """Exhaust every admissible (n, d, s) whose sum could be F_m with m + d < bound.

    The sum grows with n and s, so each loop stops at the first value above
    F_{bound-1-d}. Returns the solutions and the number of tuples evaluated.
    """
    solutions = []
    evaluated = 0
    for d in range(2, index_bound - 1):
        ceiling = fib(index_bound - 1 - d)
        n = d + 2
        while True:
            s = 3
            row_started = False
            while True:
                value = sum(fib(n + i) ** s for i in range(d + 1))
                if value > ceiling:
                    break
                row_started = True
                evaluated += 1
                m = confirm_exact(value)
                if m is not None and m + d < index_bound:
                    solutions.append(Solution(n, d, s, m, value))
                s += 1
            if not row_started:
                break
            n += 1
    return solutions, evaluated


def _consecutive_shard(args):
    s_values, n_lo, n_hi, d_lo, d_hi, primes = args
    chain = _chain(primes)
    survivors: list[tuple[int, int, int]] = []
    stats = SieveStats(moduli=chain.moduli)
    for s in s_values:
        found, st = consecutive_block(s, n_lo, n_hi, d_lo, d_hi, primes)
        survivors.extend(found)
        stats = stats.merge(st)
    return survivors, stats


def solve_consecutive_powers(
    n_max: int = 160,
    d_max: int | None = None,
    s_max: int = 19,
    n_min: int = 3,
    d_min: int = 2,
    s_min: int = 3,
    primes: tuple[int, ...] = DEFAULT_PRIMES,
    workers: int = 1,
    include_terminal: bool = True,
) -> TheoremReport:
    """All (n, d, s, m) with F_n^s + ... + F_{n+d}^s = F_m and d + 1 < n.

    Box: n_min <= n <= n_max, d_min <= d <= min(d_max, n - 2),
    s_min <= s <= s_max, plus the small-index terminal box (any s).
    """
    if n_min < 3 or d_min < 2 or s_min < 3:
        raise ValueError("need n >= 3, d >= 2, s >= 3")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    d_max = n_max - 2 if d_max is None else min(d_max, n_max - 2)
    start = time.perf_counter()
    primes = tuple(primes)
    spec = EquationSpec(
        EquationKind.CONSECUTIVE_POWERS, (n_min, n_max), (d_min, max(d_min, d_max)), (s_min, s_max)
    )
    s_values = list(range(s_min, s_max + 1))
    shards = [s_values[i::workers] for i in range(workers)]
    tasks = [(sh, n_min, n_max, d_min, d_max, primes) for sh in shards if sh]
    if workers == 1 or len(tasks) <= 1:
        results = [_consecutive_shard(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_consecutive_shard, tasks))
    stats = _merge((r[1] for r in results), _chain(primes).moduli)
    survivors = sorted(t for r in results for t in r[0])

    solutions = []
    for n, d, s in survivors:
        value = sum(fib(n + i) ** s for i in range(d + 1))
        m = confirm_exact(value)
        if m is None:
            continue
        lo, hi = m_range_consecutive(n, d, s)
        if not lo <= m <= hi:
            raise AssertionError(f"m={m} outside [{lo}, {hi}] for {(n, d, s)}")
        solutions.append(Solution(n, d, s, m, value))

    report = TheoremReport(spec, solutions, sieve=stats)
    if include_terminal:
        extra, evaluated = terminal_box()
        report.solutions.extend(x for x in extra if x not in report.solutions)
        report.checks["terminal_box"] = {
            "index_bound": TERMINAL_INDEX_BOUND,
            "evaluated": evaluated,
            "solutions": len(extra),
        }
    theta_min, _ = theta_window_minimum()
    report.checks["theta"] = {
        "pairs": len(theta_window_pairs()),
        "min_above_threshold": int(theta_min > THETA_THRESHOLD),
    }
    report.duration_ms = (time.perf_counter() - start) * 1000
    return report


# -- the Theta elimination ----------------------------------------------------------

THETA_THRESHOLD = Fraction(27, 10_000)


def theta_exact(r: int, s: int) -> QSqrt5:
    """|alpha^r sqrt5^(s-1) - 1| - alpha^-(s-1), exactly in Q(sqrt 5)."""
    return abs(ALPHA**r * sqrt5_power(s - 1) - 1) - ALPHA ** (-(s - 1))


def theta(r: int, s: int):
    """Certified enclosure of Theta(r, s)."""
    from ..analysis.hpreal import HPReal

    value = theta_exact(r, s)
    return HPReal(value.a) + HPReal(value.b) * HPReal(5).sqrt()


def theta_window_pairs(s_lo: int = 9, s_hi: int = 18) -> list[tuple[int, int]]:
    """(r, s) with s_lo <= s <= s_hi and 0.6 - 1.67 s < r < 1.75 - 1.68 s."""
    pairs = []
    for s in range(s_lo, s_hi + 1):
        lo = Fraction(6, 10) - Fraction(167, 100) * s
        hi = Fraction(175, 100) - Fraction(168, 100) * s
        r = int(lo) - 1
        while r < hi:
            if lo < r < hi:
                pairs.append((r, s))
            r += 1
    return pairs


def theta_window_minimum(s_lo: int = 9, s_hi: int = 18) -> tuple[QSqrt5, tuple[int, int]]:
    """Smallest Theta over the window, decided exactly, and where it occurs."""
    best = None
    where = None
    for r, s in theta_window_pairs(s_lo, s_hi):
        v = theta_exact(r, s)
        if best is None or v < best:
            best, where = v, (r, s)
    if best is None:
        raise ValueError("empty Theta window")
    return best, where


def terminal_minimum(s_lo: int = 3, s_hi: int = 8) -> tuple[QSqrt5, tuple[int, int]]:
    """min over s, t of (|a^s/(a^s-1) - a^t sqrt5^(s-1)| - 1/(a^s (a^s-1))) / 2^(s+3).

    t ranges over -2s+2 <= t <= -s+2.
    """
    best = None
    where = None
    for s in range(s_lo, s_hi + 1):
        a_s = ALPHA**s
        lead = a_s / (a_s - 1)
        tail = (a_s * (a_s - 1)).inverse()
        for t in range(-2 * s + 2, -s + 3):
            v = (abs(lead - ALPHA**t * sqrt5_power(s - 1)) - tail) / 2 ** (s + 3)
            if best is None or v < best:
                best, where = v, (s, t)
    return best, where
