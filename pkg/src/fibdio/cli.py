"""Command-line entry point: ``fibdio <command> ...``.

Exit codes: 0 run completed, 1 a verification did not match or a reduction
found no usable convergent, 2 invalid input, 3 precision exhausted,
4 search box too large for the oracle.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .analysis.contfrac import convergents, expand_constant
from .analysis.hpreal import DEFAULT_DIGITS, Constant, working_digits
from .errors import NoPositiveEpsilonError, PrecisionExhaustedError, RangeTooLargeError
from .modular import DEFAULT_PRIMES, MAX_MODULUS, build_filter, load_primes, pisano_period
from .solvers.bounds import BoundCase, bound_chain_report, family_reduction
from .solvers.oracle import CANDIDATE_GUARD, brute_force_oracle
from .solvers.theorems import (
    SQUARES_FAMILY,
    TWO_POWERS_FAMILY,
    TWO_POWERS_SQUARE_FAMILY,
    expected_squares_k,
    solve_consecutive_powers,
    solve_squares_k,
    solve_squares_k2,
    solve_two_powers,
)
from .solvers.types import EquationKind, EquationSpec, TheoremReport

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_PRECISION = 3
EXIT_RANGE = 4

FORMATS = ("json", "csv", "text")
ENV_DIGITS = "FIBDIO_DIGITS"


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    primes: list[int] = field(default_factory=lambda: list(DEFAULT_PRIMES))
    digits: int = DEFAULT_DIGITS
    workers: int = 1
    output: str | None = None
    format: str = "json"

    def __post_init__(self) -> None:
        if not self.primes:
            raise UsageError("the prime list is empty")
        if any(p < 2 or p >= MAX_MODULUS for p in self.primes):
            raise UsageError(f"moduli must lie in [2, {MAX_MODULUS})")
        if self.digits < 40:
            raise UsageError("digits must be >= 40")
        if self.workers < 1:
            raise UsageError("workers must be >= 1")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {', '.join(FORMATS)}")


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{what}: expected an integer, got {text!r}") from None


def _prime_list(text: str) -> list[int]:
    return [_int(t.strip(), "primes") for t in text.split(",") if t.strip()]


def read_config_file(path: str | Path) -> dict[str, str]:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for number, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{number}: expected key=value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


_CONFIG_KEYS = {"primes", "primes_file", "digits", "workers", "output", "format"}


def resolve_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    """Flags override the config file, which overrides FIBDIO_DIGITS and the defaults."""
    settings: dict[str, Any] = {}
    if environ.get(ENV_DIGITS):
        settings["digits"] = _int(environ[ENV_DIGITS], ENV_DIGITS)
    if args.config:
        file_values = read_config_file(args.config)
        unknown = set(file_values) - _CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for key in ("digits", "workers"):
            if key in file_values:
                settings[key] = _int(file_values[key], key)
        for key in ("output", "format"):
            if key in file_values:
                settings[key] = file_values[key]
        if "primes_file" in file_values:
            settings["primes"] = _load_primes(file_values["primes_file"])
        if "primes" in file_values:
            settings["primes"] = _prime_list(file_values["primes"])
    for key in ("digits", "workers", "output", "format"):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if args.primes_file is not None:
        settings["primes"] = _load_primes(args.primes_file)
    if args.primes is not None:
        settings["primes"] = _prime_list(args.primes)
    return RunConfig(**settings)


def _load_primes(path: str) -> list[int]:
    try:
        return load_primes(path)
    except OSError as exc:
        raise UsageError(f"cannot read primes file: {exc}") from None


# -- rendering -----------------------------------------------------------------------


def _solutions_csv(rows: list[tuple[int, int, int, int]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "d", "s", "m"])
    writer.writerows(rows)
    return buf.getvalue()


def _report_rows(report: TheoremReport, members: bool) -> list[tuple[int, int, int, int]]:
    listed = report.solutions if members else report.sporadic()
    return [(s.n, s.d, s.s, s.m) for s in sorted(listed)]


def report_text(report: TheoremReport) -> str:
    lines = [f"equation: {report.spec.kind.value}"]
    lines.append("ranges: " + json.dumps(report.spec.ranges_dict()))
    sv = report.sieve
    lines.append(f"sieve: {sv.candidates} candidates, {sv.survivors} survivors")
    for p, c in zip(sv.moduli, sv.discarded_per_prime):
        lines.append(f"  p={p}: discarded {c}")
    sporadic = report.sporadic()
    lines.append(f"solutions outside families: {len(sporadic)}")
    for s in sorted(sporadic):
        lines.append(f"  {s.tuple(report.with_s)}")
    for f in report.families:
        lines.append(
            f"family {f.pattern}: {f.parameter} = {f.first}..{f.last}, {f.members} verified"
        )
    for name, check in report.checks.items():
        lines.append(f"check {name}: " + ", ".join(f"{k}={v}" for k, v in check.items()))
    for b in report.bounds:
        lines.append(f"bound [{b.status.value}] {b.name}: {b.computed} {b.relation} {b.paper_value}")
    return "\n".join(lines) + "\n"


def render_report(report: TheoremReport, fmt: str, members: bool = False) -> str:
    if fmt == "json":
        return json.dumps(report.to_json_dict(include_members=members), indent=2) + "\n"
    if fmt == "csv":
        return _solutions_csv(_report_rows(report, members))
    return report_text(report)


def summary_line(report: TheoremReport) -> str:
    return (
        f"{report.spec.kind.value}: {len(report.sporadic())} solutions outside families, "
        f"{len(report.families)} families, {report.sieve.survivors} of "
        f"{report.sieve.candidates} candidates survived the sieve"
    )


def _emit(cfg: RunConfig, text: str, summary: str | None = None) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
        if summary:
            print(summary)
        print(f"wrote {cfg.output}")
    else:
        sys.stdout.write(text)


# -- commands ------------------------------------------------------------------------


def cmd_period(args, cfg: RunConfig) -> int:
    p = _int(args.p, "p")
    if p < 2:
        raise UsageError("p must be >= 2")
    print(pisano_period(p))
    return EXIT_OK


def cmd_build_filter(args, cfg: RunConfig) -> int:
    p = _int(args.p, "p")
    if p < 2 or p >= MAX_MODULUS:
        raise UsageError(f"p must lie in [2, {MAX_MODULUS})")
    filt = build_filter(p)
    data = {
        "p": filt.p,
        "period": filt.period,
        "distinct_residues": len(filt.membership),
        "density": filt.density,
    }
    if args.residues:
        data["residues"] = sorted(filt.membership)
    if cfg.format == "json":
        text = json.dumps(data, indent=2) + "\n"
    else:
        text = "".join(f"{k}: {v}\n" for k, v in data.items())
    _emit(cfg, text)
    return EXIT_OK


def cmd_cf(args, cfg: RunConfig) -> int:
    if args.terms < 1:
        raise UsageError("--terms must be >= 1")
    try:
        name = Constant(args.constant)
    except ValueError:
        names = ", ".join(c.value for c in Constant)
        raise UsageError(f"unknown constant {args.constant!r}; choose from {names}") from None
    cf = expand_constant(name, args.terms, cfg.digits)
    lines = []
    if args.convergents:
        for c in convergents(cf):
            lines.append(f"{c.t} {cf[c.t]} {c.p} {c.q}")
    else:
        lines = [str(a) for a in cf.quotients]
    if args.terms > 1:
        lines.append(f"# max a_1..a_{args.terms - 1} = {cf.max_quotient(1, args.terms - 1)}")
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def _parse_number(text: str) -> Fraction:
    try:
        value = Fraction(Decimal(text))
    except (InvalidOperation, ValueError):
        raise UsageError(f"not a number: {text!r}") from None
    return value


def cmd_reduce(args, cfg: RunConfig) -> int:
    lo, hi = args.nd_range
    if lo < 3 or hi < lo:
        raise UsageError("--nd-range needs 3 <= lo <= hi")
    M = _parse_number(args.M)
    if M.denominator == 1:
        M = int(M)
    if M < 1:
        raise UsageError("M must be >= 1")
    if args.b_exponent < 1 or args.start_index < 0:
        raise UsageError("--b-exponent must be >= 1 and --start-index >= 0")
    points = family_reduction(M, args.b_exponent, lo, hi, args.start_index, max(cfg.digits, 200))
    records = [
        {
            "nd": p.nd,
            "t": p.outcome.t,
            "q": str(p.outcome.q),
            "epsilon": float(p.outcome.epsilon.lower),
            "new_bound": p.outcome.new_bound,
            "bound_without_epsilon": p.outcome.bound_without_epsilon,
        }
        for p in points
    ]
    summary = {
        "max_new_bound": max(r["new_bound"] for r in records),
        "max_bound_without_epsilon": max(r["bound_without_epsilon"] for r in records),
    }
    if cfg.format == "json":
        text = json.dumps({"reductions": records, **summary}, indent=2) + "\n"
    elif cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        text = buf.getvalue()
    else:
        text = "".join(
            f"n+d={r['nd']} t={r['t']} eps={r['epsilon']:.4g} bound={r['new_bound']}\n"
            for r in records
        )
        text += "".join(f"{k}: {v}\n" for k, v in summary.items())
    _emit(cfg, text)
    return EXIT_OK


def cmd_bounds(args, cfg: RunConfig) -> int:
    report = bound_chain_report(args.case)
    if cfg.format == "json":
        text = json.dumps(report.to_json(), indent=2) + "\n"
    else:
        text = "".join(
            f"[{s.status.value}] {s.name}: {s.computed} {s.relation} {s.paper_value}"
            + (f"  ({s.note})" if s.note else "")
            + "\n"
            for s in report.steps
        )
    _emit(cfg, text)
    return EXIT_OK


def _run_solve(args, cfg: RunConfig) -> TheoremReport:
    primes = tuple(cfg.primes)
    eq = EquationKind(args.equation)
    if eq is EquationKind.SQUARES_K2:
        return solve_squares_k2(args.n_max or 200, args.d_max, primes)
    if eq is EquationKind.SQUARES_K:
        if args.k is None:
            raise UsageError("squares-k needs --k")
        return solve_squares_k(args.k, args.n_max or 60)
    if eq is EquationKind.TWO_POWERS:
        return solve_two_powers(
            nd_max=args.nd_max or 168,
            s_numerator=args.s_numerator,
            s_floor=args.s_floor,
            s_min=args.s_min or 2,
            s_max=args.s_max,
            d_min=args.d_min if args.d_min is not None else 1,
            primes=primes,
            workers=cfg.workers,
        )
    return solve_consecutive_powers(
        n_max=args.n_max or 160,
        d_max=args.d_max,
        s_max=args.s_max or 19,
        n_min=args.n_min or 3,
        d_min=args.d_min if args.d_min is not None else 2,
        s_min=args.s_min or 3,
        primes=primes,
        workers=cfg.workers,
        include_terminal=not args.no_terminal,
    )


def cmd_solve(args, cfg: RunConfig) -> int:
    report = _run_solve(args, cfg)
    _emit(cfg, render_report(report, cfg.format, args.members), summary_line(report))
    return EXIT_OK


def oracle_spec(args) -> EquationSpec:
    eq = EquationKind(args.equation)
    n_max = args.n_max if args.n_max is not None else 30
    if eq is EquationKind.SQUARES_K:
        if args.k is None:
            raise UsageError("squares-k needs --k")
    defaults = {
        EquationKind.SQUARES_K2: (1, 0, 2, 2),
        EquationKind.SQUARES_K: (1, 0, 2, 2),
        EquationKind.TWO_POWERS: (1, 1, 2, 6),
        EquationKind.CONSECUTIVE_POWERS: (3, 2, 3, 6),
    }
    n_min, d_min, s_min, s_max = defaults[eq]
    n_min = args.n_min if args.n_min is not None else n_min
    d_min = args.d_min if args.d_min is not None else d_min
    s_min = args.s_min if args.s_min is not None else s_min
    s_max = args.s_max if args.s_max is not None else s_max
    d_max = args.d_max if args.d_max is not None else n_max
    return EquationSpec(
        eq, (n_min, n_max), (d_min, d_max), (s_min, s_max), args.nd_max, args.k or 2
    )


def cmd_oracle(args, cfg: RunConfig) -> int:
    spec = oracle_spec(args)
    start = time.perf_counter()
    solutions = brute_force_oracle(spec, args.guard)
    report = TheoremReport(spec, solutions)
    report.checks["oracle"] = {"solutions": len(solutions)}
    report.duration_ms = (time.perf_counter() - start) * 1000
    _emit(cfg, render_report(report, cfg.format, True), f"oracle: {len(solutions)} solutions")
    return EXIT_OK


# -- verify-theorem ------------------------------------------------------------------


def _verify_a(cfg: RunConfig) -> tuple[bool, list[TheoremReport]]:
    report = solve_squares_k2(200, primes=tuple(cfg.primes))
    fam = report.families[0] if report.families else None
    ok = (
        report.tuples(sporadic_only=True) == {(1, 2, 5), (1, 0, 3), (2, 0, 3), (3, 0, 6)}
        and fam is not None
        and fam.pattern == SQUARES_FAMILY
        and (fam.first, fam.last) == (1, 200)
    )
    return ok, [report]


def _verify_b(cfg: RunConfig) -> tuple[bool, list[TheoremReport]]:
    reports = [solve_squares_k(k, 60) for k in range(3, 11)]
    ok = all(r.tuples() == expected_squares_k(r.spec.k) for r in reports)
    return ok, reports


def _verify_c(cfg: RunConfig) -> tuple[bool, list[TheoremReport]]:
    report = solve_two_powers(168, primes=tuple(cfg.primes), workers=cfg.workers)
    patterns = {f.pattern for f in report.families}
    ok = report.tuples(sporadic_only=True) == {(1, 2, 2, 5)} and patterns == {
        TWO_POWERS_SQUARE_FAMILY,
        TWO_POWERS_FAMILY,
    }
    for case in (BoundCase.THM2_CASE1, BoundCase.THM2_CASE2, BoundCase.THM2_CASE3, BoundCase.THM2_CASE4):
        chain = bound_chain_report(case)
        report.bounds.extend(chain.steps)
        report.reductions.extend(chain.reductions)
    return ok, [report]


def _verify_d(cfg: RunConfig) -> tuple[bool, list[TheoremReport]]:
    report = solve_consecutive_powers(primes=tuple(cfg.primes), workers=cfg.workers)
    report.bounds.extend(bound_chain_report(BoundCase.THM3).steps)
    return len(report.solutions) == 0, [report]


_VERIFIERS = {"A": _verify_a, "B": _verify_b, "C": _verify_c, "D": _verify_d}


def cmd_verify(args, cfg: RunConfig) -> int:
    ok, reports = _VERIFIERS[args.theorem](cfg)
    verdict = "verified" if ok else "NOT verified"
    if cfg.format == "json":
        text = (
            json.dumps(
                {
                    "theorem": args.theorem,
                    "verified": ok,
                    "reports": [r.to_json_dict(include_members=args.members) for r in reports],
                },
                indent=2,
            )
            + "\n"
        )
    elif cfg.format == "csv":
        rows = [row for r in reports for row in _report_rows(r, args.members)]
        text = _solutions_csv(rows)
    else:
        text = "".join(report_text(r) + "\n" for r in reports) + f"theorem {args.theorem}: {verdict}\n"
    _emit(cfg, text, f"theorem {args.theorem}: {verdict}")
    return EXIT_OK if ok else EXIT_MISMATCH


# -- parser --------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help="key=value configuration file")
    g.add_argument("--digits", type=int, help=f"decimal working precision (env {ENV_DIGITS})")
    g.add_argument("--workers", type=int, help="worker processes for the sieves")
    g.add_argument("--primes", help="comma-separated filter moduli")
    g.add_argument("--primes-file", help="file with one modulus per line")
    g.add_argument("--output", "-o", help="write the report here instead of standard output")
    g.add_argument("--format", choices=FORMATS, help="report format (default json)")
    return common


def _box_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-max", type=int)
    p.add_argument("--n-min", type=int)
    p.add_argument("--d-max", type=int)
    p.add_argument("--d-min", type=int)
    p.add_argument("--nd-max", type=int)
    p.add_argument("--s-min", type=int)
    p.add_argument("--s-max", type=int)
    p.add_argument("--k", type=int, help="order of the k-bonacci sequence (squares-k)")
    p.add_argument("--members", action="store_true", help="list every family member as well")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="fibdio",
        description="Exponential Diophantine equations in Fibonacci numbers.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("period", parents=[common], help="Pisano period of p")
    p.add_argument("p")
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("build-filter", parents=[common], help="Fibonacci residues mod p")
    p.add_argument("p")
    p.add_argument("--residues", action="store_true", help="list the residues")
    p.set_defaults(func=cmd_build_filter)

    p = sub.add_parser("cf", parents=[common], help="certified continued fraction of a constant")
    p.add_argument("constant", help=", ".join(c.value for c in Constant))
    p.add_argument("--terms", type=int, default=20)
    p.add_argument("--convergents", action="store_true", help="print t a_t p_t q_t per line")
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser(
        "reduce", parents=[common], help="Dujella-Petho reduction over a range of n+d"
    )
    p.add_argument("--nd-range", type=int, nargs=2, metavar=("LO", "HI"), default=(3, 164))
    p.add_argument("--M", default="1.88e17")
    p.add_argument("--b-exponent", type=int, default=165, help="B = 1.5**(1/b)")
    p.add_argument("--start-index", type=int, default=98, help="zero-based convergent index")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bounds", parents=[common], help="recompute a published bound chain")
    p.add_argument("case", choices=[c.value for c in BoundCase])
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("solve", parents=[common], help="run a sieving pipeline")
    p.add_argument("equation", choices=[e.value for e in EquationKind])
    _box_options(p)
    p.add_argument("--s-numerator", type=int, default=58057, help="two-powers: s <= this/(n+d-1)")
    p.add_argument("--s-floor", type=int, default=3, help="two-powers: smallest exponent cap")
    p.add_argument("--no-terminal", action="store_true", help="consecutive: skip the small box")
    p.add_argument("--default", action="store_true", help="use the published search box")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", parents=[common], help="exhaustive search without filters")
    p.add_argument("equation", choices=[e.value for e in EquationKind])
    _box_options(p)
    p.add_argument("--guard", type=int, default=CANDIDATE_GUARD, help="largest candidate count")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify-theorem", parents=[common], help="reproduce a theorem")
    p.add_argument("theorem", choices=sorted(_VERIFIERS))
    p.add_argument("--members", action="store_true", help="list every family member as well")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        with working_digits(cfg.digits):
            return args.func(args, cfg)
    except RangeTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except PrecisionExhaustedError as exc:
        hint = f" (try --digits {exc.needed_digits})" if exc.needed_digits else ""
        print(f"error: precision exhausted: {exc}{hint}", file=sys.stderr)
        return EXIT_PRECISION
    except NoPositiveEpsilonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
