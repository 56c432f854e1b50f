"""Batch entry point: verification suites, ODE sweeps, PDE runs and regime classification.

Every command merges an optional ``--config`` JSON file with explicit flags,
validates the result against the schema shipped in ``fracnls/schemas`` and
writes a JSON report whose deterministic part is hashed with SHA-256.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on a usage
or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .constants import ProblemParams, i_power
from .errors import DomainError, HypothesisError, NoBlowupError, StepSizeError
from .fode import FodeProblem, check_sandwich, solve_fode
from .frac_core import GridFunction1D, caputo_derivative, fundamental_identity_residual, mittag_leffler
from .pde_sim import (ComplexField, SpatialGrid, check_inequality38, compute_MR, export_mr_series,
                      export_snapshots, simulate, weak_residual)
from .regime import DataProfile, InitialData, classify
from .test_functions import (SpaceTestFn, TimeTestFn, frac_laplacian_phi, lemma2_constants,
                             lemma2_quadrature, lemma3_empirical_constant, lemma5_integral, phi_eval,
                             w_right_caputo_closed)

OUTPUT_ENV = "FRACNLS_OUTPUT_DIR"
DEFAULT_OUTPUT = "fracnls-runs"

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DEFAULT_TOLERANCES = {
    "lemma1": 1e-4,
    "lemma2": 1e-6,
    "lemma3": 0.02,
    "lemma4": 1e-8,
    "lemma4_closed": 1e-4,
    "lemma5": 0.0,
    "identity28": 1e-4,
    "identity28_halving": 0.55,
    "mittag_leffler": 1e-3,
    "inequality38": 0.05,
    "weak_residual": 1e-2,
}


class ConfigError(Exception):
    """Invalid configuration; maps to exit code 2."""


# reports ---------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float | None
    bound: float | None
    tolerance: float | None
    details: dict = field(default_factory=dict)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


@dataclass
class RunReport:
    command: str
    config: dict
    checks: list = field(default_factory=list)
    artifacts: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def add(self, check: CheckResult) -> None:
        self.checks.append(check)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def deterministic(self) -> dict:
        config = {k: v for k, v in self.config.items() if k != "out"}
        return _jsonable({"command": self.command, "config": config,
                          "checks": [asdict(c) for c in self.checks],
                          "results": self.results, "artifacts": sorted(self.artifacts),
                          "passed": self.passed})

    def digest(self) -> str:
        payload = json.dumps(self.deterministic(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_json(self) -> dict:
        body = self.deterministic()
        body["digest"] = self.digest()
        body["timings"] = _jsonable(self.timings)
        return body

    def write(self, directory: Path) -> Path:
        path = directory / f"{self.command}_report.json"
        path.write_text(json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n")
        return path

    def summary_table(self) -> str:
        rows = [("check", "pass", "measured", "bound", "tol")]
        for c in self.checks:
            rows.append((c.name, "PASS" if c.passed else "FAIL", _fmt(c.measured), _fmt(c.bound),
                         _fmt(c.tolerance)))
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows]
        return "\n".join(lines)


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, (int, float, np.floating)):
        return f"{float(value):.6g}"
    return str(value)


# config handling ---------------------------------------------------------------

def load_schema(command: str) -> dict:
    text = resources.files("fracnls").joinpath("schemas", f"{command}.json").read_text()
    return json.loads(text)


def validate_config(command: str, config: dict) -> dict:
    try:
        jsonschema.validate(config, load_schema(command))
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {path}: {exc.message}") from None
    return config


def _read_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None


def _merge(config: dict, overrides: dict) -> dict:
    merged = dict(config)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return merged


def output_dir(config: dict) -> Path:
    directory = Path(config.get("out") or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _tolerance(config: dict, name: str) -> float:
    return float(config.get("tolerances", {}).get(name, DEFAULT_TOLERANCES[name]))


def _as_list(value):
    return list(value) if isinstance(value, (list, tuple)) else [value]


# verify ------------------------------------------------------------------------

def _suite_lemma1(config: dict, report: RunReport) -> None:
    tol = _tolerance(config, "lemma1")
    n = config.get("points", 2001)
    for alpha, eta in itertools.product(config.get("alpha", [0.3, 0.5, 0.7]), config.get("eta", [3, 5])):
        fn = TimeTestFn(1.0, eta)
        grid = GridFunction1D.from_callable(lambda t: (1 - t) ** eta, 0.0, 1.0, n)
        numeric = caputo_derivative(grid, alpha, "right", scheme="l1-2").samples
        exact = w_right_caputo_closed(fn, alpha, grid.times)
        err = float(np.max(np.abs(numeric - exact)) / np.max(np.abs(exact)))
        report.add(CheckResult(f"lemma1[alpha={alpha},eta={eta}]", err <= tol, err, 0.0, tol))


def _suite_lemma2(config: dict, report: RunReport) -> None:
    tol = _tolerance(config, "lemma2")
    for alpha, p, eta in itertools.product(config.get("alpha", [0.5]), config.get("p", [2.0]),
                                           config.get("eta", [2.0])):
        try:
            c1, c2 = lemma2_constants(alpha, p, eta)
        except HypothesisError as exc:
            report.add(CheckResult(f"lemma2[alpha={alpha},p={p},eta={eta}]", False, None, None, tol,
                                   {"error": str(exc)}))
            continue
        worst = 0.0
        measured_c1 = None
        for T in config.get("horizons", [0.5, 1.0, 4.0]):
            first, second = lemma2_quadrature(TimeTestFn(T, eta), alpha, p)
            e1 = first / (c1 * T ** (1 - alpha * p / (p - 1)))
            e2 = second / (c2 * T ** (1 - alpha))
            worst = max(worst, abs(e1 - 1), abs(e2 - 1))
            if T == 1.0:
                measured_c1 = first
        report.add(CheckResult(f"lemma2[alpha={alpha},p={p},eta={eta}]", worst <= tol, worst, 0.0, tol,
                               {"C_1": c1, "C_2": c2, "C_1_measured": measured_c1}))


def _suite_lemma3(config: dict, report: RunReport) -> None:
    tol = _tolerance(config, "lemma3")
    N, s = config.get("N", 1), config.get("s", 0.5)
    q = config.get("q", N + 2 * s)
    radius = config.get("sample_radius", 10.0)
    fn = SpaceTestFn(N, q)
    C = lemma3_empirical_constant(fn, s, radius, config.get("n_samples", 401))
    rng = np.random.default_rng(config.get("seed", 0))
    radii = rng.uniform(0.0, radius, 64)
    points = radii if N == 1 else np.stack([radii] + [0 * radii] * (N - 1), axis=-1)
    ratio = np.abs(frac_laplacian_phi(fn, s, points)) / phi_eval(fn, points)
    worst = float(np.max(ratio))
    report.add(CheckResult(f"lemma3[N={N},q={q},s={s}]", worst <= C * (1 + tol), worst, C, tol,
                           {"C_Nq_empirical": C}))


def _suite_lemma4(config: dict, report: RunReport) -> None:
    tol = _tolerance(config, "lemma4")
    N, s = config.get("N", 1), config.get("s", 0.5)
    q = config.get("q", N + 2 * s)
    base = SpaceTestFn(N, q)
    rng = np.random.default_rng(config.get("seed", 0))
    radii = np.sort(rng.uniform(0.0, 5.0, 16))
    for R in config.get("scales", [0.5, 1.0, 2.0, 8.0]):
        x = R * radii
        pts = x if N == 1 else np.stack([x] + [0 * x] * (N - 1), axis=-1)
        ref = radii if N == 1 else np.stack([radii] + [0 * radii] * (N - 1), axis=-1)
        scaled = frac_laplacian_phi(base.rescaled(R), s, pts, method="quadrature")
        expected = R ** (-2 * s) * frac_laplacian_phi(base, s, ref, method="quadrature")
        err = float(np.max(np.abs(scaled - expected)) / np.max(np.abs(expected)))
        report.add(CheckResult(f"lemma4_scaling[R={R}]", err <= tol, err, 0.0, tol))
    if N == 1 and s == 0.5 and q == 2.0:
        tol_closed = _tolerance(config, "lemma4_closed")
        x = np.linspace(-5.0, 5.0, 401)
        numeric = frac_laplacian_phi(base, s, x, method="quadrature")
        exact = frac_laplacian_phi(base, s, x, method="closed")
        err = float(np.max(np.abs(numeric - exact)))
        report.add(CheckResult("lemma4_closed_form", err <= tol_closed, err, 0.0, tol_closed))


def _suite_lemma5(config: dict, report: RunReport) -> None:
    tol = _tolerance(config, "lemma5")
    N, s = config.get("N", 1), config.get("s", 0.5)
    q = config.get("q", N + 2 * s)
    for R, p in itertools.product(config.get("scales", [0.5, 1.0, 2.0, 8.0]), config.get("p", [1.5, 2.0, 3.0])):
        res = lemma5_integral(SpaceTestFn(N, q, R), s, p)
        report.add(CheckResult(f"lemma5[R={R},p={p}]", res.value <= res.bound * (1 + tol), res.value,
                               res.bound, tol, {"C_Nq": res.C_Nq}))


_FUNCTIONS = {"t": lambda t: t, "t^2": lambda t: t * t, "sin": np.sin}


def _suite_identity28(config: dict, report: RunReport) -> None:
    tol = _tolerance(config, "identity28")
    halving = _tolerance(config, "identity28_halving")
    n = config.get("points", 2001)
    for delta in config.get("delta", [0.3, 0.5, 0.7]):
        for name, func in _FUNCTIONS.items():
            coarse = fundamental_identity_residual(GridFunction1D.from_callable(func, 0.0, 1.0, n), delta)
            fine = fundamental_identity_residual(GridFunction1D.from_callable(func, 0.0, 1.0, 2 * n - 1), delta)
            ratio = fine / coarse if coarse > 0 else 0.0
            ok = coarse <= tol and (ratio <= halving or max(coarse, fine) <= 1e-12)
            report.add(CheckResult(f"identity28[f={name},delta={delta}]", ok, coarse, 0.0, tol,
                                   {"refined_residual": fine, "ratio": ratio, "ratio_limit": halving}))


SUITES = {"lemma1": _suite_lemma1, "lemma2": _suite_lemma2, "lemma3": _suite_lemma3,
          "lemma4": _suite_lemma4, "lemma5": _suite_lemma5, "identity28": _suite_identity28}


def cmd_verify(config: dict) -> RunReport:
    if not config.get("suites"):
        raise ConfigError("no suites selected")
    validate_config("verify", config)
    report = RunReport("verify", config)
    for suite in config["suites"]:
        start = time.perf_counter()
        SUITES[suite](config, report)
        report.timings[suite] = time.perf_counter() - start
    return report


# fode --------------------------------------------------------------------------

def _fode_case(args: tuple) -> dict:
    alpha, p, B, g0, threshold, max_ref, tol, points = args
    problem = FodeProblem(alpha, B, p, g0)
    try:
        rep = check_sandwich(problem, tol, threshold=threshold, max_refinements=max_ref)
    except NoBlowupError as exc:
        return {"alpha": alpha, "p": p, "B": B, "g0": g0, "error": str(exc)}
    t_stop = 0.95 * rep.t_last_finite
    step = t_stop / (points - 1)
    sol = solve_fode(problem, step * (points - 1), step)
    return {"alpha": alpha, "p": p, "B": B, "g0": g0, **rep.to_json(),
            "trajectory": [sol.times.tolist(), sol.values.tolist()]}


def _pool_map(func, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))


def cmd_fode(config: dict) -> RunReport:
    validate_config("fode", config)
    report = RunReport("fode", config)
    out = output_dir(config)
    cases = [(a, p, B, g0, config.get("threshold", 1e8), config.get("max_refinements", 30),
              config.get("sandwich_tolerance", 0.05), config.get("trajectory_points", 201))
             for a, p, B, g0 in itertools.product(config["alpha"], config["p"], config["B"], config["g0"])]
    start = time.perf_counter()
    results = _pool_map(_fode_case, cases, config.get("workers", 1))
    report.timings["sweep"] = time.perf_counter() - start
    summary_rows = []
    for idx, res in enumerate(results):
        label = f"alpha={res['alpha']},p={res['p']},B={res['B']},g0={res['g0']}"
        if "error" in res:
            report.add(CheckResult(f"sandwich[{label}]", False, None, None, None, {"error": res["error"]}))
            continue
        times, values = res.pop("trajectory")
        name = f"fode_trajectory_{idx:03d}.csv"
        with open(out / name, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "g"])
            writer.writerows(zip(times, values))
        report.artifacts.append(name)
        summary_rows.append(res)
        report.add(CheckResult(f"sandwich[{label}]", res["passed"], res["t_threshold"], res["T_U"],
                               res["tolerance"], {"t_last_finite": res["t_last_finite"], "T_L": res["T_L"]}))
    with open(out / "fode_sandwich.csv", "w", newline="") as fh:
        fields = ["alpha", "p", "B", "g0", "t_last_finite", "t_threshold", "T_L", "T_U", "passed"]
        writer = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(summary_rows)
    report.artifacts.append("fode_sandwich.csv")
    report.results["cases"] = summary_rows
    return report


# simulate ------------------------------------------------------------------------

def _params_from(block: dict, **extra) -> ProblemParams:
    lam = complex(*block.get("lambda", [1.0, 0.0]))
    if block.get("gamma_rotation"):
        gamma = i_power(block["alpha"]).conjugate()
    else:
        gamma = complex(*block.get("gamma", [1.0, 0.0]))
    return ProblemParams(block["alpha"], block["beta"], block["N"], block["p"], lam=lam, gamma=gamma, **extra)


def _initial_field(grid: SpatialGrid, initial: dict) -> tuple[ComplexField, np.ndarray | None]:
    kind = initial["kind"]
    amp = initial.get("amplitude", 1.0)
    x = grid.points()
    if kind == "mode":
        modes = initial.get("wavenumber", [1] * grid.N)
        if len(modes) != grid.N or any(float(m) != int(m) for m in modes):
            raise ConfigError("mode wavenumber needs one integer index per dimension")
        k = 2 * math.pi * np.array(modes, dtype=float) / grid.L
        phase = x * k[0] if grid.N == 1 else np.tensordot(x, k, axes=([-1], [0]))
        return ComplexField(grid, amp * np.exp(1j * phase)), k
    if kind == "gaussian":
        width = initial.get("width", 1.0)
        return ComplexField(grid, amp * np.exp(-(grid.radii() / width) ** 2) + 0j), None
    if kind == "constant":
        return ComplexField(grid, np.full(grid.shape, amp, dtype=complex)), None
    return ComplexField(grid, np.zeros(grid.shape, dtype=complex)), None


def cmd_simulate(config: dict) -> RunReport:
    validate_config("simulate", config)
    report = RunReport("simulate", config)
    out = output_dir(config)
    block = config["params"]
    try:
        params = _params_from(block)
        grid = SpatialGrid(block["N"], config["grid"]["L"], config["grid"]["n"])
    except (DomainError, HypothesisError) as exc:
        raise ConfigError(str(exc)) from None
    R = config.get("R", grid.L / 8)
    if R > grid.L / 4:
        raise ConfigError(f"R = {R} exceeds L/4 = {grid.L / 4}")
    u0, k = _initial_field(grid, config["initial"])
    linear = config.get("linear", False)
    checks = config.get("checks", [])
    if "mittag_leffler" in checks and (k is None or not linear):
        raise ConfigError("the Mittag-Leffler check needs a linear run from a single mode")
    start = time.perf_counter()
    try:
        traj = simulate(params, u0, config["t_end"], config["step"],
                        blowup_threshold=config.get("blowup_threshold", 1e6), linear=linear)
    except StepSizeError as exc:
        report.add(CheckResult("stability", False, None, None, None, {"advice": str(exc)}))
        return report
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    report.timings["simulate"] = time.perf_counter() - start
    report.results["blew_up"] = traj.blew_up
    report.results["final_time"] = float(traj.times[-1])
    fn = SpaceTestFn(grid.N, params.q, R)
    series = [compute_MR(traj.field_at(j), params.gamma, params.alpha, fn) for j in range(traj.times.size)]
    with open(out / "simulate_mr.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "M_R"])
        writer.writerows(zip(traj.times.tolist(), series))
    report.artifacts.append("simulate_mr.csv")
    every = config.get("snapshot_every", max(1, traj.times.size // 20))
    for path in export_snapshots(traj, out / "snapshots", every=every):
        report.artifacts.append(str(path.relative_to(out)))

    if "mittag_leffler" in checks:
        tol = _tolerance(config, "mittag_leffler")
        t = float(traj.times[-1])
        basis = u0.values / np.abs(u0.values)
        coeff = complex(np.mean(traj.snapshots[-1] * basis.conj()))
        amp = complex(np.mean(u0.values * basis.conj()))
        modulus = float(np.linalg.norm(k))
        exact = amp * mittag_leffler(params.alpha, i_power(params.alpha).conjugate() * modulus ** params.beta
                                     * t ** params.alpha)
        err = abs(coeff - exact) / abs(exact)
        report.add(CheckResult("mittag_leffler", err <= tol, err, 0.0, tol, {"t": t}))
    if "inequality38" in checks:
        tol = _tolerance(config, "inequality38")
        ineq = check_inequality38(traj, params, fn, tol=tol)
        path = export_mr_series(ineq, out / "inequality_margins.csv") if ineq.precondition_ok else None
        if path is not None:
            report.artifacts.append(path.name)
        summary = ineq.summary()
        report.results["inequality38"] = summary
        report.add(CheckResult("barrier", ineq.barrier_ok, float(np.min(ineq.M_R)), ineq.level, 0.0,
                               {"precondition_ok": ineq.precondition_ok,
                                "data_margin_ratio": ineq.M_R0 / ineq.level}))
        report.add(CheckResult("inequality38", ineq.passed, summary["min_relative_margin"], 0.0, tol))
    if "weak_residual" in checks:
        tol = _tolerance(config, "weak_residual")
        T = float(traj.times[-1])
        eta = config.get("eta", 3.0)
        res = weak_residual(traj, params, TimeTestFn(T, eta), fn, space_operator="periodic", linear=linear)
        report.add(CheckResult("weak_residual", res <= tol, res, 0.0, tol, {"T": T}))
    return report


# classify ------------------------------------------------------------------------

def _initial_data(initial: dict | None) -> InitialData | None:
    if initial is None:
        return None
    kind = initial["kind"]
    amp = initial.get("amplitude", 1.0)
    if kind == "gaussian":
        width = initial.get("width", 1.0)
        return InitialData(lambda r: amp * math.exp(-(r / width) ** 2), radial=True)
    k = initial.get("k", 0.5)
    if kind == "power_outer":
        return InitialData(lambda r: amp * abs(r) ** (-k) if abs(r) > 1 else amp, radial=True,
                           breakpoints=(1.0,))
    return InitialData(lambda r: amp * abs(r) ** (-k) if 0 < abs(r) <= 1 else 0.0, radial=True,
                       breakpoints=(1.0,))


def classify_entry(entry: dict) -> dict:
    """Verdict JSON for one classify config entry (scalar parameters only)."""
    block = entry["params"]
    try:
        params = _params_from(block, epsilon=block.get("epsilon", 1.0))
        prof = entry["profile"]
        profile = DataProfile(prof["kind"], prof.get("k"), prof.get("s", 0.0),
                              prof.get("sign_case", "lambda1_G1"), prof.get("margin"))
        verdict = classify(params, profile, _initial_data(entry.get("initial")), eta=entry.get("eta"),
                           C_Nq=entry.get("C_Nq"))
    except (DomainError, HypothesisError) as exc:
        return {"error": str(exc)}
    return verdict.to_json()


def _expand(config: dict) -> list[dict]:
    block, prof = config["params"], config["profile"]
    keys = [("params", name) for name in ("alpha", "beta", "N", "p", "epsilon") if name in block]
    keys += [("profile", "k")] if "k" in prof else []
    values = [_as_list(config[a][b]) for a, b in keys]
    entries = []
    for combo in itertools.product(*values):
        entry = json.loads(json.dumps(config))
        for (a, b), v in zip(keys, combo):
            entry[a][b] = v
        entries.append(entry)
    return entries


def cmd_classify(config: dict) -> RunReport:
    validate_config("classify", config)
    report = RunReport("classify", config)
    entries = _expand(config)
    if len(entries) > 1 and not config.get("sweep"):
        raise ConfigError("list-valued parameters need --sweep")
    start = time.perf_counter()
    verdicts = _pool_map(classify_entry, entries, config.get("workers", 1))
    report.timings["classify"] = time.perf_counter() - start
    for entry, verdict in zip(entries, verdicts):
        label = ",".join(f"{k}={v}" for k, v in entry["params"].items() if not isinstance(v, list))
        if "error" in verdict:
            report.add(CheckResult(f"classify[{label}]", False, None, None, None, verdict))
    if config.get("sweep"):
        out = output_dir(config)
        with open(out / "classify_sweep.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "beta", "N", "p", "epsilon", "k", "theorem", "status", "band",
                             "bound_kind", "bound_value"])
            for entry, verdict in zip(entries, verdicts):
                b, bound = entry["params"], verdict.get("bound") or {}
                writer.writerow([b["alpha"], b["beta"], b["N"], b["p"], b.get("epsilon", 1.0),
                                 entry["profile"].get("k"), verdict.get("theorem", "error"),
                                 verdict.get("status", verdict.get("error")), verdict.get("band"),
                                 bound.get("kind"), bound.get("value")])
        report.artifacts.append("classify_sweep.csv")
        report.results["verdicts"] = verdicts
    else:
        report.results["verdict"] = verdicts[0]
    return report


# argument parsing ----------------------------------------------------------------

def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracnls", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (flags override its entries)")
        p.add_argument("--out", help=f"output directory (default: ${OUTPUT_ENV} or ./{DEFAULT_OUTPUT})")
        p.add_argument("--seed", type=int)
        p.add_argument("--quiet", action="store_true", help="suppress the summary table")

    v = sub.add_parser("verify", help="run operator and test-function verification suites")
    common(v)
    v.add_argument("--suite", action="append", dest="suites", choices=sorted(SUITES))
    v.add_argument("--alpha", type=_floats, help="comma-separated orders")
    v.add_argument("--p", type=_floats)
    v.add_argument("--eta", type=_floats)
    v.add_argument("--delta", type=_floats)
    v.add_argument("--points", type=int)

    f = sub.add_parser("fode", help="blow-up brackets for the scalar fractional ODE")
    common(f)
    f.add_argument("--alpha", type=_floats)
    f.add_argument("--p", type=_floats)
    f.add_argument("--B", type=_floats)
    f.add_argument("--g0", type=_floats)
    f.add_argument("--workers", type=int)

    s = sub.add_parser("simulate", help="desk-scale PDE run with optional checks")
    common(s)

    c = sub.add_parser("classify", help="classify a parameter point (or sweep) by applicable result")
    common(c)
    c.add_argument("--sweep", action="store_true", default=None)
    c.add_argument("--workers", type=int)
    return parser


COMMANDS = {"verify": cmd_verify, "fode": cmd_fode, "simulate": cmd_simulate, "classify": cmd_classify}


def run(argv: list[str] | None = None) -> tuple[int, RunReport | None]:
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "quiet")}
    try:
        config = _merge(_read_config(args.config), flags)
        report = COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG, None
    except (DomainError, HypothesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG, None
    path = report.write(output_dir(config))
    if not args.quiet:
        print(report.summary_table())
        print(f"report: {path}  digest: {report.digest()}")
    return (EXIT_OK if report.passed else EXIT_FAIL), report


def main(argv: list[str] | None = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
