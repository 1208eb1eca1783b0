import csv
import io
import json
import subprocess
import sys

import pytest

from fibdio.cli import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_PRECISION,
    EXIT_RANGE,
    RunConfig,
    build_parser,
    main,
    read_config_file,
    resolve_config,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report_json(out):
    data = json.loads(out)
    data.pop("duration_ms", None)
    return data


class TestPeriod:
    @pytest.mark.parametrize("p,want", [("3010349", "62"), ("2", "3"), ("39161", "110")])
    def test_examples(self, capsys, p, want):
        code, out, _ = run(capsys, "period", p)
        assert code == EXIT_OK and out.strip() == want

    @pytest.mark.parametrize("p", ["x", "1", "-5"])
    def test_malformed(self, capsys, p):
        code, _, err = run(capsys, "period", p)
        assert code == EXIT_INVALID and "error" in err


class TestBuildFilter:
    def test_residues(self, capsys):
        code, out, _ = run(capsys, "build-filter", "2", "--residues")
        data = json.loads(out)
        assert code == EXIT_OK
        assert (data["period"], data["residues"], data["distinct_residues"]) == (3, [0, 1], 2)


class TestCf:
    def quotients(self, out):
        return [line.strip() for line in out.splitlines() if line.strip() and not line.startswith("#")]

    def test_alpha(self, capsys):
        code, out, _ = run(capsys, "cf", "alpha", "--terms", "5")
        assert code == EXIT_OK and self.quotients(out) == ["1"] * 5

    def test_sqrt5(self, capsys):
        code, out, _ = run(capsys, "cf", "sqrt5", "--terms", "4")
        assert self.quotients(out) == ["2", "4", "4", "4"]

    def test_gamma_star_max(self, capsys):
        code, out, _ = run(capsys, "cf", "gamma-star", "--terms", "70")
        assert code == EXIT_OK and "max a_1..a_69 = 29" in out

    def test_convergents(self, capsys):
        code, out, _ = run(capsys, "cf", "alpha", "--terms", "6", "--convergents")
        rows = [line.split() for line in self.quotients(out)]
        assert [int(r[3]) for r in rows] == [1, 1, 2, 3, 5, 8]

    def test_precision_exhausted(self, capsys):
        code, _, err = run(capsys, "cf", "gamma-star", "--terms", "3000", "--digits", "40")
        assert code == EXIT_PRECISION and "--digits" in err

    def test_unknown_constant(self, capsys):
        code, _, _ = run(capsys, "cf", "pi", "--terms", "3")
        assert code == EXIT_INVALID


class TestSolve:
    def test_squares_k(self, capsys):
        code, out, _ = run(capsys, "solve", "squares-k", "--k", "4", "--n-max", "40")
        assert code == EXIT_OK
        tuples = {tuple(s["tuple"]) for s in json.loads(out)["solutions"]}
        assert tuples == {(1, 0, 3), (1, 1, 3), (2, 0, 3), (3, 0, 5)}

    def test_consecutive_default_small(self, capsys):
        code, out, _ = run(capsys, "solve", "consecutive", "--n-max", "20", "--s-max", "6")
        assert code == EXIT_OK and json.loads(out)["solutions"] == []

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "solve", "two-powers", "--nd-max", "12", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["n", "d", "s", "m"]
        assert ["1", "2", "2", "5"] in rows[1:]

    def test_text(self, capsys):
        code, out, _ = run(capsys, "solve", "two-powers", "--nd-max", "12", "--format", "text")
        assert code == EXIT_OK and out.startswith("equation: two-powers")

    def test_json_schema(self, capsys):
        _, out, _ = run(capsys, "solve", "two-powers", "--nd-max", "12")
        data = json.loads(out)
        for key in ("equation", "ranges", "bounds", "sieve", "solutions", "families", "duration_ms"):
            assert key in data
        assert set(data["sieve"]) >= {"candidates", "discarded_per_prime", "survivors"}

    def test_invalid_range(self, capsys):
        code, _, _ = run(capsys, "solve", "two-powers", "--nd-max", "2")
        assert code == EXIT_INVALID

    def test_deterministic(self, capsys):
        args = ("solve", "two-powers", "--nd-max", "30", "--s-max", "100")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        _, parallel, _ = run(capsys, *args, "--workers", "2")
        assert report_json(first) == report_json(second) == report_json(parallel)
        strip = lambda text: [l for l in text.splitlines() if "duration_ms" not in l]
        assert strip(first) == strip(second)

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "solve", "squares-k2", "--n-max", "20", "-o", str(target))
        assert code == EXIT_OK and "wrote" in out
        assert json.loads(target.read_text())["equation"] == "squares-k2"

    def test_primes_file(self, capsys, tmp_path):
        path = tmp_path / "primes.txt"
        path.write_text("# two filters\n39161\n28657\n")
        code, out, _ = run(capsys, "solve", "two-powers", "--nd-max", "12", "--primes-file", str(path))
        assert code == EXIT_OK
        assert len(json.loads(out)["sieve"]["discarded_per_prime"]) == 2
        code, _, _ = run(capsys, "solve", "two-powers", "--primes-file", str(tmp_path / "missing"))
        assert code == EXIT_INVALID


class TestOracle:
    def test_small(self, capsys):
        code, out, _ = run(capsys, "oracle", "squares-k2", "--n-max", "10")
        assert code == EXIT_OK
        tuples = {tuple(s["tuple"]) for s in json.loads(out)["solutions"]}
        assert {(1, 2, 5), (1, 0, 3), (2, 0, 3), (3, 0, 6)} <= tuples

    def test_range_too_large(self, capsys):
        code, _, err = run(capsys, "oracle", "two-powers", "--n-max", "1000", "--d-max", "1000", "--s-max", "100")
        assert code == EXIT_RANGE and "error" in err


class TestReduceAndBounds:
    def test_reduce(self, capsys):
        code, out, _ = run(capsys, "reduce", "--nd-range", "3", "5")
        assert code == EXIT_OK
        assert "3" in out

    def test_bounds(self, capsys):
        code, out, _ = run(capsys, "bounds", "THM3")
        assert code == EXIT_OK
        assert json.loads(out)["case"] == "THM3"


class TestVerify:
    @pytest.mark.parametrize("theorem", ["A", "B", "D"])
    def test_quick_theorems(self, capsys, theorem):
        code, out, _ = run(capsys, "verify-theorem", theorem)
        assert code == EXIT_OK
        data = report_json(out)
        assert data["theorem"] == theorem and data["verified"] is True


class TestConfig:
    def parse(self, *argv):
        return build_parser().parse_args(["period", "7", *argv])

    def test_defaults(self):
        cfg = resolve_config(self.parse(), environ={})
        assert cfg.digits == 120 and cfg.workers == 1 and cfg.format == "json"

    def test_precedence(self, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text("# settings\ndigits = 80\nworkers=3\nprimes = 9349, 9901\n")
        assert read_config_file(conf)["digits"] == "80"
        env = {"FIBDIO_DIGITS": "60"}
        assert resolve_config(self.parse(), environ=env).digits == 60
        cfg = resolve_config(self.parse("--config", str(conf)), environ=env)
        assert (cfg.digits, cfg.workers, list(cfg.primes)) == (80, 3, [9349, 9901])
        cfg = resolve_config(self.parse("--config", str(conf), "--digits", "90"), environ=env)
        assert cfg.digits == 90

    def test_env_through_main(self, capsys, monkeypatch):
        monkeypatch.setenv("FIBDIO_DIGITS", "10")
        code, _, _ = run(capsys, "period", "7")
        assert code == EXIT_INVALID

    def test_bad_config(self, tmp_path):
        conf = tmp_path / "bad.conf"
        conf.write_text("colour=blue\n")
        with pytest.raises(ValueError):
            resolve_config(self.parse("--config", str(conf)), environ={})
        conf.write_text("no equals sign\n")
        with pytest.raises(ValueError):
            read_config_file(conf)

    def test_run_config_invariants(self):
        with pytest.raises(ValueError):
            RunConfig(primes=[], digits=120)
        with pytest.raises(ValueError):
            RunConfig(digits=39)
        with pytest.raises(ValueError):
            RunConfig(workers=0)
        with pytest.raises(ValueError):
            RunConfig(format="xml")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fibdio", "period", "28657"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "92"
