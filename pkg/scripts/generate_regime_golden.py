"""Regenerate the regime golden files under tests/golden.

Writes ``regime_grid.json`` (the classify entries) and
``regime_verdicts.json`` (their verdicts). Run after an intentional change
to the classifier and commit both files.
"""

from __future__ import annotations

import argparse
import itertools
import json
from pathlib import Path

from fracnls.cli import classify_entry

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def entry(alpha, beta, N, p, kind, *, lam=(1.0, 0.0), gamma=(1.0, 0.0), eps=1.0, k=None, s=0.0,
          sign_case="lambda1_G1", margin=1.0, initial=None, C_Nq=None):
    profile = {"kind": kind, "s": s, "sign_case": sign_case}
    if k is not None:
        profile["k"] = k
    if margin is not None:
        profile["margin"] = margin
    out = {"params": {"alpha": alpha, "beta": beta, "N": N, "p": p, "lambda": list(lam),
                      "gamma": list(gamma), "epsilon": eps},
           "profile": profile}
    if initial is not None:
        out["initial"] = initial
    if C_Nq is not None:
        out["C_Nq"] = C_Nq
    return out


def grid() -> list[dict]:
    cases = []
    # integrable data, lambda pairing: subcritical, critical, above Fujita
    for alpha, (N, beta, p) in itertools.product((0.3, 0.7), ((1, 1.0, 1.5), (2, 1.0, 1.2), (1, 1.5, 2.0))):
        cases.append(entry(alpha, beta, N, p, "integrable_L1"))
    cases.append(entry(0.5, 1.0, 1, 1.5, "integrable_L1", margin=-1.0))
    cases.append(entry(0.5, 1.0, 1, 1.5, "integrable_L1", lam=(0.0, 1.0)))
    cases.append(entry(0.5, 1.0, 1, 1.5, "integrable_L1", lam=(0.0, -2.0), sign_case="lambda2_G2"))
    cases.append(entry(0.5, 1.0, 1, 1.5, "sobolev_Hs", s=0.25))
    cases.append(entry(0.5, 1.0, 1, 1.5, "integrable_L1", margin=None,
                       initial={"kind": "gaussian", "amplitude": 1.0, "width": 1.0}))
    for margin in (0.5, 50.0):
        cases.append(entry(0.5, 1.0, 1, 2.0, "integrable_L1", margin=margin, C_Nq=1.0))
        cases.append(entry(0.5, 1.0, 2, 1.5, "integrable_L1", margin=margin, C_Nq=1.0))
    cases.append(entry(0.5, 1.0, 1, 3.0, "integrable_L1"))
    # outer singular data, lambda pairing (small-data lifespan)
    for alpha, k, eps in itertools.product((0.4, 0.8), (0.6, 0.9), (1e-3, 1e-1, 10.0)):
        cases.append(entry(alpha, 1.0, 1, 1.8, "outer_singular", k=k, eps=eps, margin=0.0, C_Nq=1.0))
    cases.append(entry(0.5, 1.0, 1, 1.8, "outer_singular", k=1.5, margin=0.0, C_Nq=1.0))
    cases.append(entry(0.5, 1.0, 1, 3.5, "outer_singular", k=0.6, margin=0.0, C_Nq=1.0))
    cases.append(entry(0.5, 1.0, 1, 1.8, "outer_singular", k=0.7, margin=-0.2, C_Nq=1.0))
    # inner singular data, lambda pairing (large data, local nonexistence)
    for eps in (1e-2, 1.0, 1e3, 1e6):
        cases.append(entry(0.5, 1.0, 1, 2.0, "inner_singular", k=0.3, eps=eps, margin=0.0, C_Nq=1.0))
    cases.append(entry(0.5, 1.0, 3, 2.5, "inner_singular", k=0.7, margin=0.0, C_Nq=1.0))
    cases.append(entry(0.5, 1.0, 1, 2.5, "inner_singular", k=0.8, margin=0.0, C_Nq=1.0))
    cases.append(entry(0.5, 1.0, 2, 2.5, "inner_singular", k=0.8, margin=0.0, C_Nq=1.0))
    cases.append(entry(0.5, 1.0, 2, 4.0, "inner_singular", k=0.5, s=0.25, margin=0.0, C_Nq=1.0))
    cases.append(entry(0.5, 1.0, 1, 2.5, "inner_singular", k=0.9, margin=None, C_Nq=1.0))
    # gamma pairing: integrable data, outer and inner singular data, functional method
    gam = (0.0, -1.0)
    lam_i = (0.0, 1.0)
    for alpha in (0.3, 0.6):
        cases.append(entry(alpha, 1.0, 1, 1.5, "integrable_L1", lam=lam_i, gamma=gam, sign_case="gamma_pairing"))
    cases.append(entry(0.5, 1.0, 1, 1.5, "integrable_L1", lam=lam_i, gamma=(0.0, 1.0), sign_case="gamma_pairing"))
    for eps in (1e-3, 0.1, 5.0):
        cases.append(entry(0.5, 1.0, 1, 1.5, "outer_singular", lam=lam_i, gamma=gam, k=0.8, eps=eps,
                           sign_case="gamma_pairing", margin=0.0, C_Nq=1.0))
    for eps in (1.0, 20.0, 1e3):
        cases.append(entry(0.5, 1.0, 1, 2.0, "inner_singular", lam=lam_i, gamma=gam, k=0.4, eps=eps,
                           sign_case="gamma_pairing", margin=0.0, C_Nq=1.0))
    rot = (0.7071067811865476, -0.7071067811865476)
    for amplitude in (0.05, 2.5):
        cases.append(entry(0.5, 1.0, 1, 2.0, "integrable_L1", gamma=rot, sign_case="gamma_pairing", margin=None,
                           initial={"kind": "gaussian", "amplitude": amplitude, "width": 8.0}, C_Nq=1.0))
    cases.append(entry(0.5, 1.0, 1, 2.0, "integrable_L1", gamma=rot, sign_case="gamma_pairing", margin=None,
                       initial={"kind": "power_inner", "amplitude": 30.0, "k": 0.4}, C_Nq=1.0))
    return cases


def verdicts(cases: list[dict]) -> list[dict]:
    return [classify_entry(case) for case in cases]


def dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=GOLDEN)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    cases = grid()
    (args.out / "regime_grid.json").write_text(dump(cases))
    (args.out / "regime_verdicts.json").write_text(dump(verdicts(cases)))
    print(f"wrote {len(cases)} cases to {args.out}")


if __name__ == "__main__":
    main()
