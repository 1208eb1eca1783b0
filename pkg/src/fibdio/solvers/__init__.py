"""Search pipelines, the brute-force oracle and bound-chain reports."""

from .bounds import BoundCase, BoundChainReport, bound_chain_report, family_reduction
from .oracle import brute_force_oracle
from .ranges import m_range, m_range_consecutive, s_cap
from .theorems import (
    expected_squares_k,
    solve_consecutive_powers,
    solve_squares_k,
    solve_squares_k2,
    solve_two_powers,
    theta,
    theta_window_minimum,
)
from .types import EquationKind, EquationSpec, Solution, TheoremReport

__all__ = [
    "BoundCase",
    "BoundChainReport",
    "bound_chain_report",
    "family_reduction",
    "EquationKind",
    "EquationSpec",
    "Solution",
    "TheoremReport",
    "brute_force_oracle",
    "expected_squares_k",
    "m_range",
    "m_range_consecutive",
    "s_cap",
    "solve_consecutive_powers",
    "solve_squares_k",
    "solve_squares_k2",
    "solve_two_powers",
    "theta",
    "theta_window_minimum",
]
