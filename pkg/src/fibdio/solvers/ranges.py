"""Index windows that must contain m for a solution to exist."""

from __future__ import annotations

DEFAULT_S_NUMERATOR = 58057


def m_range(n: int, d: int, s: int) -> tuple[int, int]:
    """Inclusive window for m in F_n^s + F_{n+d}^s = F_m."""
    if n < 1 or d < 0 or s < 1:
        raise ValueError("need n >= 1, d >= 0, s >= 1")
    return s * (n + d - 2) + 2, s * (n + d - 1) + 2


def m_range_consecutive(n: int, d: int, s: int) -> tuple[int, int]:
    """Inclusive window for m in F_n^s + ... + F_{n+d}^s = F_m.

    From m/(n+d) < s < m/(n+d-3).
    """
    if n < 3 or d < 2 or s < 3:
        raise ValueError("need n >= 3, d >= 2, s >= 3")
    return (n + d - 3) * s + 1, (n + d) * s - 1


def s_cap(nd: int, numerator: int = DEFAULT_S_NUMERATOR, floor: int = 3) -> int:
    """Largest exponent searched for a given n + d: numerator/(n+d-1), at least ``floor``."""
    if nd < 2:
        raise ValueError("n + d must be >= 2")
    return max(floor, numerator // (nd - 1))
