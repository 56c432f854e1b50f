"""Desk run of the functional blow-up argument.

Part one simulates the nonlinear equation from a Gaussian bump and checks
that the weighted functional ``M_R`` stays above its barrier level and obeys
the differential growth inequality along the trajectory.

Part two compares the blow-up bracket of the comparison ODE against the
closed-form lifespan bound for power-type data, in both the large-data and
small-data regimes.
"""

from __future__ import annotations

import argparse

import numpy as np

from fracnls.constants import ProblemParams, i_power, thm6_constants
from fracnls.pde_sim import ComplexField, SpatialGrid, check_inequality38, simulate
from fracnls.regime import InitialData, corollary_radius, functional_fode_bracket
from fracnls.test_functions import SpaceTestFn


def desk_simulation(args) -> bool:
    params = ProblemParams(0.5, 1.0, 1, 2.0, lam=1.0, gamma=i_power(0.5).conjugate())
    grid = SpatialGrid(1, args.L, args.n)
    u0 = ComplexField.from_callable(grid, lambda x: args.amplitude * np.exp(-(x / args.width) ** 2))
    traj = simulate(params, u0, args.t_end, args.step, blowup_threshold=args.threshold)
    report = check_inequality38(traj, params, SpaceTestFn(1, params.q, args.R), tol=0.05)
    rel = report.margins / np.maximum(np.maximum(np.abs(report.lhs), np.abs(report.rhs)), 1e-300)
    print(f"M_R(0) = {report.M_R0:.4f}, level = {report.level:.4f}, ratio = {report.M_R0 / report.level:.2f}")
    print(f"snapshots = {traj.times.size}, blew up = {traj.blew_up} at t = {traj.times[-1]:.4f}")
    print(f"barrier holds = {report.barrier_ok}, min relative margin = {np.min(rel):+.3f}")
    return bool(report.passed)


def bracket_table(params: ProblemParams, k: float, regime: str, multipliers, profile) -> bool:
    bundle = thm6_constants(params.with_(k=k))
    eps_key, B_key, kappa_key = ("eps_3", "B_2", "kappa_0") if regime == "large" else ("eps_2", "B_1", "kappa_1")
    ok = True
    print(f"{regime}-data regime (k = {k}, p = {params.p})")
    for mult in multipliers:
        eps = mult * bundle[eps_key]
        R = corollary_radius(params.with_(k=k), eps, bundle, regime=regime)
        data = InitialData(lambda x, e=eps: e * profile(abs(x)), breakpoints=(1.0,))
        bracket = functional_fode_bracket(params.with_(k=k), data, R)
        bound = bundle[B_key] * eps ** (-1 / (params.alpha * bundle[kappa_key]))
        ok &= bracket.t_threshold <= bound
        print(f"  eps = {eps:.4e}  R = {R:.4e}  bracket = [{bracket.t_last_finite:.4e}, "
              f"{bracket.t_threshold:.4e}]  bound = {bound:.4e}")
    return ok


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--L", type=float, default=64.0)
    parser.add_argument("--n", type=int, default=512)
    parser.add_argument("--amplitude", type=float, default=2.5)
    parser.add_argument("--width", type=float, default=8.0)
    parser.add_argument("--R", type=float, default=4.0)
    parser.add_argument("--t-end", type=float, default=0.2)
    parser.add_argument("--step", type=float, default=2e-4)
    parser.add_argument("--threshold", type=float, default=1e3)
    args = parser.parse_args(argv)

    ok = desk_simulation(args)
    gamma = i_power(0.5).conjugate()
    ok &= bracket_table(ProblemParams(0.5, 1.0, 1, 2.0, lam=1.0, gamma=gamma), 0.4, "large", (1.0, 2.0, 10.0),
                        lambda r: r ** -0.4 if 0 < r <= 1 else 0.0)
    ok &= bracket_table(ProblemParams(0.5, 1.0, 1, 1.5, lam=1.0, gamma=gamma), 0.8, "small", (1.0, 0.5, 0.1),
                        lambda r: min(1.0, r ** -0.8) if r > 0 else 1.0)
    print("all checks passed" if ok else "some checks failed")
    return int(not ok)


if __name__ == "__main__":
    raise SystemExit(main())
