"""Records shared by the theorem pipelines."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class EquationKind(str, enum.Enum):
    SQUARES_K2 = "squares-k2"
    SQUARES_K = "squares-k"
    TWO_POWERS = "two-powers"
    CONSECUTIVE_POWERS = "consecutive"


@dataclass(frozen=True)
class EquationSpec:
    """An equation together with an inclusive search box.

    ``n_range``, ``d_range`` and ``s_range`` are inclusive (lo, hi) pairs;
    ``nd_max`` optionally caps n + d.
    """

    kind: EquationKind
    n_range: tuple[int, int]
    d_range: tuple[int, int]
    s_range: tuple[int, int] = (2, 2)
    nd_max: int | None = None
    k: int = 2

    def __post_init__(self) -> None:
        for name in ("n_range", "d_range", "s_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty: {lo} > {hi}")
        if self.n_range[0] < 1 or self.d_range[0] < 0:
            raise ValueError("need n >= 1 and d >= 0")
        if self.kind is EquationKind.SQUARES_K and self.k < 3:
            raise ValueError("squares-k needs k >= 3")
        if self.kind is EquationKind.CONSECUTIVE_POWERS:
            if self.n_range[0] < 3 or self.d_range[0] < 2 or self.s_range[0] < 3:
                raise ValueError("consecutive powers need n >= 3, d >= 2, s >= 3")
        if self.kind is EquationKind.TWO_POWERS and self.s_range[0] < 2:
            raise ValueError("two powers need s >= 2")

    def exponent(self) -> bool:
        return self.kind in (EquationKind.TWO_POWERS, EquationKind.CONSECUTIVE_POWERS)

    def ranges_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "n": list(self.n_range),
            "d": list(self.d_range),
        }
        if self.exponent():
            out["s"] = list(self.s_range)
        if self.nd_max is not None:
            out["nd_max"] = self.nd_max
        if self.kind is EquationKind.SQUARES_K:
            out["k"] = self.k
        return out


@dataclass(frozen=True, order=True)
class Solution:
    """(n, d, m) or (n, d, s, m); ``s`` is 2 for the squares equations."""

    n: int
    d: int
    s: int
    m: int
    value: int = field(compare=False, repr=False)
    family: str | None = field(default=None, compare=False)

    def tuple(self, with_s: bool) -> tuple[int, ...]:
        return (self.n, self.d, self.s, self.m) if with_s else (self.n, self.d, self.m)

    def to_json(self, with_s: bool) -> dict[str, Any]:
        return {
            "tuple": list(self.tuple(with_s)),
            "m": self.m,
            "value_digits": len(str(self.value)),
        }


@dataclass
class FamilyRecord:
    """A parametric family verified member by member over the searched box."""

    pattern: str
    parameter: str
    first: int
    last: int
    members: int

    def to_json(self) -> dict[str, Any]:
        return {
            "pattern": self.pattern,
            "parameter": self.parameter,
            "range": [self.first, self.last],
            "members_verified": self.members,
        }


@dataclass
class SieveStats:
    candidates: int = 0
    moduli: tuple[int, ...] = ()
    discarded_per_prime: list[int] = field(default_factory=list)
    survivors: int = 0

    def __post_init__(self) -> None:
        if not self.discarded_per_prime:
            self.discarded_per_prime = [0] * len(self.moduli)

    def merge(self, other: SieveStats) -> SieveStats:
        if self.moduli != other.moduli:
            raise ValueError("cannot merge statistics of different filter chains")
        return SieveStats(
            self.candidates + other.candidates,
            self.moduli,
            [a + b for a, b in zip(self.discarded_per_prime, other.discarded_per_prime)],
            self.survivors + other.survivors,
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "candidates": self.candidates,
            "discarded_per_prime": [
                {"p": p, "discarded": c} for p, c in zip(self.moduli, self.discarded_per_prime)
            ],
            "survivors": self.survivors,
        }


class StepStatus(str, enum.Enum):
    PASS = "PASS"
    DISCREPANCY = "DISCREPANCY"


@dataclass(frozen=True)
class BoundStep:
    """One recomputed inequality of a bound chain.

    ``relation`` says how ``computed`` must compare with ``paper_value`` for
    the published claim to hold: "<=", ">=", "==", "<", ">" or "~"
    (within five percent).
    """

    name: str
    computed: Any
    paper_value: Any
    relation: str
    anchor: str
    status: StepStatus
    note: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "computed": _jsonable(self.computed),
            "paper_value": _jsonable(self.paper_value),
            "relation": self.relation,
            "anchor": self.anchor,
            "status": self.status.value,
            "note": self.note,
        }


@dataclass(frozen=True)
class ReductionRecord:
    label: str
    q: int
    t: int
    epsilon: float
    new_bound: int
    bound_without_epsilon: int

    def to_json(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "t": self.t,
            "q": str(self.q),
            "epsilon": self.epsilon,
            "new_bound": self.new_bound,
            "bound_without_epsilon": self.bound_without_epsilon,
        }


def _jsonable(v: Any) -> Any:
    if isinstance(v, bool) or v is None or isinstance(v, (str, int)):
        return v
    if isinstance(v, float):
        return v
    try:
        return float(v)
    except (TypeError, ValueError):
        return str(v)


@dataclass
class TheoremReport:
    spec: EquationSpec
    solutions: list[Solution] = field(default_factory=list)
    families: list[FamilyRecord] = field(default_factory=list)
    bounds: list[BoundStep] = field(default_factory=list)
    reductions: list[ReductionRecord] = field(default_factory=list)
    sieve: SieveStats = field(default_factory=SieveStats)
    checks: dict[str, dict[str, int]] = field(default_factory=dict)
    duration_ms: float = 0.0

    @property
    def with_s(self) -> bool:
        return self.spec.exponent()

    def sporadic(self) -> list[Solution]:
        return [s for s in self.solutions if s.family is None]

    def family_members(self, pattern: str) -> list[Solution]:
        return [s for s in self.solutions if s.family == pattern]

    def tuples(self, sporadic_only: bool = False) -> set[tuple[int, ...]]:
        source = self.sporadic() if sporadic_only else self.solutions
        return {s.tuple(self.with_s) for s in source}

    def to_json_dict(self, include_members: bool = False) -> dict[str, Any]:
        listed = self.solutions if include_members else self.sporadic()
        return {
            "equation": self.spec.kind.value,
            "ranges": self.spec.ranges_dict(),
            "bounds": [b.to_json() for b in self.bounds],
            "sieve": self.sieve.to_json(),
            "solutions": [s.to_json(self.with_s) for s in sorted(listed)],
            "families": [f.to_json() for f in self.families],
            "reductions": [r.to_json() for r in self.reductions],
            "checks": self.checks,
            "duration_ms": round(self.duration_ms, 3),
        }
