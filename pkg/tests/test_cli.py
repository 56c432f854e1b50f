from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import pytest

from fracnls.cli import load_schema, main, run
from fracnls.constants import ProblemParams
from fracnls.constants import testfn_method_constants as method_constants

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def report(directory: Path, command: str) -> dict:
    return json.loads((directory / f"{command}_report.json").read_text())


def write(tmp_path: Path, name: str, obj: dict) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.mark.parametrize("command", ["verify", "fode", "simulate", "classify"])
def test_schemas_are_valid(command):
    jsonschema.Draft202012Validator.check_schema(load_schema(command))


class TestVerify:
    def test_time_integrals(self, tmp_path):
        code = main(["verify", "--suite", "lemma2", "--alpha", "0.5", "--p", "2", "--eta", "2",
                     "--out", str(tmp_path), "--quiet"])
        assert code == 0
        check = report(tmp_path, "verify")["checks"][0]
        assert abs(check["details"]["C_1_measured"] - 1.1317687) <= 1e-6

    def test_identity(self, tmp_path):
        assert main(["verify", "--suite", "identity28", "--delta", "0.5", "--out", str(tmp_path), "--quiet"]) == 0

    def test_no_suites(self, tmp_path, capsys):
        assert main(["verify", "--out", str(tmp_path)]) == 2
        assert "no suites selected" in capsys.readouterr().err

    def test_failing_check_exits_one(self, tmp_path):
        cfg = write(tmp_path, "v.json", {"suites": ["identity28"], "delta": [0.5], "points": 11})
        assert main(["verify", "--config", cfg, "--out", str(tmp_path), "--quiet"]) == 1

    def test_schema_violation(self, tmp_path, capsys):
        cfg = write(tmp_path, "v.json", {"suites": ["lemma2"], "unknown": 1})
        assert main(["verify", "--config", cfg, "--out", str(tmp_path)]) == 2
        assert "config invalid" in capsys.readouterr().err

    def test_output_dir_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FRACNLS_OUTPUT_DIR", str(tmp_path / "env"))
        assert main(["verify", "--suite", "lemma2", "--quiet"]) == 0
        assert (tmp_path / "env" / "verify_report.json").exists()

    def test_deterministic_report(self, tmp_path):
        args = ["verify", "--suite", "lemma3", "--suite", "lemma2", "--seed", "7", "--quiet"]
        main(args + ["--out", str(tmp_path / "a")])
        main(args + ["--out", str(tmp_path / "b")])
        a, b = report(tmp_path / "a", "verify"), report(tmp_path / "b", "verify")
        assert a["digest"] == b["digest"]
        a.pop("timings"), b.pop("timings")
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


class TestFode:
    def test_fractional_bracket(self, tmp_path):
        assert main(["fode", "--alpha", "0.5", "--p", "2", "--B", "1", "--g0", "1", "--out", str(tmp_path),
                     "--quiet"]) == 0
        case = report(tmp_path, "fode")["results"]["cases"][0]
        assert 0.0490874 <= case["t_last_finite"] and case["t_threshold"] <= 0.7853982
        assert (tmp_path / "fode_trajectory_000.csv").exists() and (tmp_path / "fode_sandwich.csv").exists()

    def test_classical_bracket(self, tmp_path):
        assert main(["fode", "--alpha", "1", "--p", "2", "--B", "1", "--g0", "1", "--out", str(tmp_path),
                     "--quiet"]) == 0
        case = report(tmp_path, "fode")["results"]["cases"][0]
        assert case["t_last_finite"] == pytest.approx(1.0, abs=1e-2)

    def test_invalid_power(self, tmp_path):
        assert main(["fode", "--alpha", "0.5", "--p", "1", "--B", "1", "--g0", "1", "--out", str(tmp_path)]) == 2

    def test_parallel_sweep_matches_serial(self, tmp_path):
        args = ["fode", "--alpha", "0.4,0.8", "--p", "2,3", "--B", "1", "--g0", "1", "--quiet"]
        assert main(args + ["--workers", "1", "--out", str(tmp_path / "s")]) == 0
        assert main(args + ["--workers", "2", "--out", str(tmp_path / "p")]) == 0
        assert report(tmp_path / "s", "fode")["checks"] == report(tmp_path / "p", "fode")["checks"]


class TestSimulate:
    def test_linear_mode(self, tmp_path):
        code = main(["simulate", "--config", str(CONFIGS / "linear_mode.json"), "--out", str(tmp_path), "--quiet"])
        assert code == 0
        assert report(tmp_path, "simulate")["checks"][0]["name"] == "mittag_leffler"

    def test_functional_bump(self, tmp_path):
        code = main(["simulate", "--config", str(CONFIGS / "theorem6_bump.json"), "--out", str(tmp_path),
                     "--quiet"])
        assert code == 0
        checks = {c["name"]: c for c in report(tmp_path, "simulate")["checks"]}
        assert checks["barrier"]["passed"] and checks["barrier"]["details"]["data_margin_ratio"] >= 4

    def test_scale_too_large(self, tmp_path):
        cfg = json.loads((CONFIGS / "theorem6_bump.json").read_text())
        cfg["R"] = 20.0
        assert main(["simulate", "--config", write(tmp_path, "s.json", cfg), "--out", str(tmp_path)]) == 2

    def test_instability_reported(self, tmp_path):
        cfg = json.loads((CONFIGS / "theorem6_bump.json").read_text())
        cfg["initial"]["amplitude"] = 200.0
        cfg["step"] = 0.05
        cfg["t_end"] = 0.1
        code, rep = run(["simulate", "--config", write(tmp_path, "s.json", cfg), "--out", str(tmp_path), "--quiet"])
        assert code == 1
        assert "reduce the step" in rep.checks[0].details["advice"]


class TestClassify:
    def base(self, **profile):
        return {"params": {"alpha": 0.5, "beta": 1.0, "N": 1, "p": 1.5, "lambda": [1, 0]},
                "profile": {"kind": "integrable_L1", "margin": 1.0, **profile}}

    def test_subcritical(self, tmp_path):
        code = main(["classify", "--config", write(tmp_path, "c.json", self.base()), "--out", str(tmp_path),
                     "--quiet"])
        assert code == 0
        assert report(tmp_path, "classify")["results"]["verdict"]["theorem"] == "T1_subcritical"

    def test_small_data_at_threshold(self, tmp_path):
        bundle = method_constants(ProblemParams(0.5, 1.0, 1, 1.8, k=0.7), C_Nq=1.0)
        cfg = {"params": {"alpha": 0.5, "beta": 1.0, "N": 1, "p": 1.8, "epsilon": bundle["eps_0"]},
               "profile": {"kind": "outer_singular", "k": 0.7, "margin": 0.0}, "C_Nq": 1.0}
        assert main(["classify", "--config", write(tmp_path, "c.json", cfg), "--out", str(tmp_path), "--quiet"]) == 0
        verdict = report(tmp_path, "classify")["results"]["verdict"]
        assert verdict["theorem"] == "T2_small_data" and verdict["bound"]["value"] == 1.0

    def test_contradictory_profile(self, tmp_path):
        cfg = {"params": {"alpha": 0.5, "beta": 1.0, "N": 1, "p": 1.8},
               "profile": {"kind": "outer_singular", "k": 1.5, "margin": 0.0}, "C_Nq": 1.0}
        main(["classify", "--config", write(tmp_path, "c.json", cfg), "--out", str(tmp_path), "--quiet"])
        verdict = report(tmp_path, "classify")["results"]["verdict"]
        assert verdict["theorem"] == "none"
        failed = [c for c in verdict["conditions"] if c["holds"] is False]
        assert failed

    def test_sweep_csv(self, tmp_path):
        cfg = self.base()
        cfg["params"]["p"] = [1.5, 2.5]
        cfg["params"]["alpha"] = [0.3, 0.6]
        assert main(["classify", "--config", write(tmp_path, "c.json", cfg), "--sweep", "--workers", "2",
                     "--out", str(tmp_path), "--quiet"]) == 0
        rows = (tmp_path / "classify_sweep.csv").read_text().splitlines()
        assert len(rows) == 5

    def test_list_without_sweep(self, tmp_path):
        cfg = self.base()
        cfg["params"]["p"] = [1.5, 2.5]
        assert main(["classify", "--config", write(tmp_path, "c.json", cfg), "--out", str(tmp_path)]) == 2
