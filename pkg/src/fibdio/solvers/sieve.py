"""Vectorized Pisano-filter kernels.

Each kernel walks a block of the search box, evaluates the left-hand side
modulo every prime of a chain and keeps only the tuples whose residue is a
Fibonacci residue for all of them. Survivors still need exact confirmation.

Residues of F_i mod p depend only on i mod pi(p), so power tables are built
over one period: ``table[j, s] = F_j^s mod p`` for 0 <= j < pi(p).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..modular import FilterChain, PrimeFilter, default_chain, pow_mod_array
from .types import SieveStats


@lru_cache(maxsize=16)
def _chain(primes: tuple[int, ...]) -> FilterChain:
    return default_chain(primes)


_TABLES: dict[tuple[int, int], np.ndarray] = {}


def power_table(filt: PrimeFilter, s_max: int) -> np.ndarray:
    """table[j, s] = F_j^s mod p for j < period and 0 <= s <= s_max (int64)."""
    key = (filt.p, s_max)
    table = _TABLES.get(key)
    if table is None:
        # reuse a wider table when one exists
        for (p, width), t in _TABLES.items():
            if p == filt.p and width >= s_max:
                return t[:, : s_max + 1]
        base = np.array(filt.residues, dtype=np.int64)[:, None]
        exps = np.arange(s_max + 1, dtype=np.int64)[None, :]
        table = pow_mod_array(base, exps, filt.p)
        table.setflags(write=False)
        _TABLES[key] = table
    return table


def two_powers_block(
    nd: int,
    n_min: int,
    d_min: int,
    s_lo: int,
    s_hi: int,
    primes: tuple[int, ...],
) -> tuple[list[tuple[int, int, int]], SieveStats]:
    """Sieve F_n^s + F_{nd}^s over n in [n_min, nd - d_min], s in [s_lo, s_hi]."""
    chain = _chain(primes)
    stats = SieveStats(moduli=chain.moduli)
    n_hi = nd - d_min
    if n_hi < n_min or s_hi < s_lo:
        return [], stats
    ns = np.arange(n_min, n_hi + 1, dtype=np.int64)
    ss = np.arange(s_lo, s_hi + 1, dtype=np.int64)
    stats.candidates = len(ns) * len(ss)

    first, rest = chain.filters[0], chain.filters[1:]
    table = power_table(first, s_hi)
    rows = table[:, s_lo : s_hi + 1][ns % first.period]
    top = table[nd % first.period, s_lo : s_hi + 1]
    alive = first.contains_array((rows + top[None, :]) % first.p)
    n_idx, s_idx = np.nonzero(alive)
    stats.discarded_per_prime[0] = stats.candidates - len(n_idx)
    cand_n = ns[n_idx]
    cand_s = ss[s_idx]

    for pos, filt in enumerate(rest, start=1):
        if len(cand_n) == 0:
            break
        table = power_table(filt, s_hi)
        resid = (table[cand_n % filt.period, cand_s] + table[nd % filt.period, cand_s]) % filt.p
        keep = filt.contains_array(resid)
        stats.discarded_per_prime[pos] = int(len(keep) - keep.sum())
        cand_n, cand_s = cand_n[keep], cand_s[keep]

    stats.survivors = len(cand_n)
    return [(int(n), nd - int(n), int(s)) for n, s in zip(cand_n, cand_s)], stats


def squares_block(
    n_lo: int, n_hi: int, d_lo: int, d_hi: int, primes: tuple[int, ...]
) -> tuple[list[tuple[int, int]], SieveStats]:
    """Sieve F_n^2 + F_{n+d}^2 over a rectangle of (n, d)."""
    chain = _chain(primes)
    stats = SieveStats(moduli=chain.moduli)
    ns = np.arange(n_lo, n_hi + 1, dtype=np.int64)[:, None]
    ds = np.arange(d_lo, d_hi + 1, dtype=np.int64)[None, :]
    n_grid, d_grid = np.broadcast_arrays(ns, ds)
    cand_n = n_grid.ravel()
    cand_d = d_grid.ravel()
    stats.candidates = len(cand_n)
    for pos, filt in enumerate(chain.filters):
        if len(cand_n) == 0:
            break
        sq = np.array(filt.residues, dtype=np.int64) ** 2 % filt.p
        resid = (sq[cand_n % filt.period] + sq[(cand_n + cand_d) % filt.period]) % filt.p
        keep = filt.contains_array(resid)
        stats.discarded_per_prime[pos] = int(len(keep) - keep.sum())
        cand_n, cand_d = cand_n[keep], cand_d[keep]
    stats.survivors = len(cand_n)
    return [(int(n), int(d)) for n, d in zip(cand_n, cand_d)], stats


def consecutive_block(
    s: int,
    n_lo: int,
    n_hi: int,
    d_lo: int,
    d_hi: int,
    primes: tuple[int, ...],
) -> tuple[list[tuple[int, int, int]], SieveStats]:
    """Sieve F_n^s + ... + F_{n+d}^s for one s, with d <= min(d_hi, n - 2)."""
    chain = _chain(primes)
    stats = SieveStats(moduli=chain.moduli)
    ns = np.arange(n_lo, n_hi + 1, dtype=np.int64)[:, None]
    ds = np.arange(d_lo, d_hi + 1, dtype=np.int64)[None, :]
    n_grid, d_grid = np.broadcast_arrays(ns, ds)
    valid = d_grid + 1 < n_grid
    cand_n = n_grid[valid]
    cand_d = d_grid[valid]
    stats.candidates = len(cand_n)
    top = n_hi + d_hi + 1
    idx = np.arange(top + 1, dtype=np.int64)
    for pos, filt in enumerate(chain.filters):
        if len(cand_n) == 0:
            break
        res = np.array(filt.residues, dtype=np.int64)[idx % filt.period]
        powers = pow_mod_array(res, np.full_like(res, s), filt.p)
        prefix = np.concatenate(([0], np.cumsum(powers) % filt.p))
        # prefix[i] = sum_{j < i} F_j^s
        resid = (prefix[cand_n + cand_d + 1] - prefix[cand_n]) % filt.p
        keep = filt.contains_array(resid)
        stats.discarded_per_prime[pos] = int(len(keep) - keep.sum())
        cand_n, cand_d = cand_n[keep], cand_d[keep]
    stats.survivors = len(cand_n)
    return [(int(n), int(d), s) for n, d in zip(cand_n, cand_d)], stats
