"""Blow-up bracket sweep for the scalar fractional ODE.

For every (alpha, p, B, g0) on the grid, locate the numerical blow-up
bracket and compare it with the analytic lower and upper bounds. Writes a
CSV with one row per case.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from fracnls.fode import FodeProblem, check_sandwich


def run_case(case: tuple[float, float, float, float]) -> dict:
    alpha, p, B, g0 = case
    report = check_sandwich(FodeProblem(alpha, B, p, g0))
    return {"alpha": alpha, "p": p, "B": B, "g0": g0, **report.to_json()}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--alpha", type=float, nargs="+", default=[0.3, 0.6, 0.9])
    parser.add_argument("--p", type=float, nargs="+", default=[1.5, 2.0, 3.0])
    parser.add_argument("--B", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    parser.add_argument("--g0", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", type=Path, default=Path("fracnls-runs/sandwich_sweep.csv"))
    args = parser.parse_args(argv)

    cases = list(itertools.product(args.alpha, args.p, args.B, args.g0))
    start = time.perf_counter()
    with ProcessPoolExecutor(max_workers=max(1, args.workers)) as pool:
        rows = list(pool.map(run_case, cases))
    elapsed = time.perf_counter() - start

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    failed = sum(not r["passed"] for r in rows)
    print(f"{len(rows)} cases, {failed} outside the bracket, {elapsed:.1f} s -> {args.out}")
    return int(failed > 0)


if __name__ == "__main__":
    raise SystemExit(main())
