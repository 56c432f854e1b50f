"""Compare the linear pseudospectral solver against the Mittag-Leffler oracle.

A single Fourier mode ``exp(i k x)`` evolves under the linear equation as
``E_alpha(i^(-alpha) |k|^beta t^alpha) exp(i k x)``. The script reports the
relative error of the mode coefficient at ``t_end`` for each (alpha, beta).
"""

from __future__ import annotations

import argparse
import itertools
import math
import time

import numpy as np

from fracnls.constants import ProblemParams, i_power
from fracnls.frac_core import mittag_leffler
from fracnls.pde_sim import ComplexField, SpatialGrid, simulate


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--alpha", type=float, nargs="+", default=[0.4, 0.6])
    parser.add_argument("--beta", type=float, nargs="+", default=[0.5, 1.0, 1.5])
    parser.add_argument("--n", type=int, default=256)
    parser.add_argument("--mode", type=int, default=1)
    parser.add_argument("--t-end", type=float, default=1.0)
    parser.add_argument("--step", type=float, default=1e-3)
    parser.add_argument("--tol", type=float, default=1e-3)
    args = parser.parse_args(argv)

    grid = SpatialGrid(1, 2 * math.pi, args.n)
    u0 = ComplexField.from_callable(grid, lambda x: np.exp(1j * args.mode * x))
    worst = 0.0
    print(f"{'alpha':>6} {'beta':>6} {'rel err':>10} {'seconds':>8}")
    for alpha, beta in itertools.product(args.alpha, args.beta):
        start = time.perf_counter()
        traj = simulate(ProblemParams(alpha, beta, 1, 2.0), u0, args.t_end, args.step, linear=True)
        coeff = np.mean(traj.snapshots[-1] * u0.values.conj())
        z = i_power(alpha).conjugate() * abs(args.mode) ** beta * args.t_end ** alpha
        exact = mittag_leffler(alpha, z)
        err = abs(coeff - exact) / abs(exact)
        worst = max(worst, err)
        print(f"{alpha:6.2f} {beta:6.2f} {err:10.3e} {time.perf_counter() - start:8.2f}")
    print(f"max relative error {worst:.3e} (tolerance {args.tol:g})")
    return int(worst > args.tol)


if __name__ == "__main__":
    raise SystemExit(main())
