r"""Scalar Caputo initial-value problems and blow-up brackets.

Solves :math:`{}^cD^\alpha_{0|t} y = F(t, y)` through its Volterra form

.. math:: y(t) = y_0 + \frac{1}{\Gamma(\alpha)}\int_0^t (t-s)^{\alpha-1}F(s, y(s))\,ds

with a fractional Adams predictor and a product-trapezoidal corrector
applied twice (PECE with two corrections). Nodes may be nonuniform, which
lets :func:`detect_blowup` halve the step as the solution steepens.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .constants import blowup_bound_constants
from .errors import DomainError, HypothesisError, NoBlowupError
from .frac_core import GridFunction1D, check_order, gamma_fn, mittag_leffler

OVERFLOW = 1e300


@dataclass(frozen=True)
class FodeProblem:
    r""":math:`{}^cD^\alpha g = B(g^p - A)`, :math:`g(0) = g_0`."""

    alpha: float
    B: float
    p: float
    g0: float
    A: float = 0.0

    def __post_init__(self):
        check_order(self.alpha, "alpha")
        if not self.B > 0:
            raise DomainError(f"B must be positive, got {self.B}")
        if not self.p > 1:
            raise DomainError(f"p must exceed 1, got {self.p}")
        if not self.g0 > 0:
            raise DomainError(f"g0 must be positive, got {self.g0}")
        if not self.A >= 0:
            raise DomainError(f"A must be nonnegative, got {self.A}")

    def rhs(self, t, y):
        return self.B * (abs(y) ** self.p - self.A)


@dataclass(frozen=True)
class FodeSolution:
    """Trajectory on a uniform grid; ``blew_up`` marks truncation by overflow."""

    grid: GridFunction1D
    blew_up: bool

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def values(self) -> np.ndarray:
        return self.grid.samples


@dataclass(frozen=True)
class BlowupEstimate:
    """Bracket ``[t_last_finite, t_threshold]`` around the first threshold crossing."""

    t_last_finite: float
    t_threshold: float
    threshold_value: float
    T_L: float
    T_U: float
    refinement_levels: int

    def to_json(self) -> dict:
        return {k: float(v) if isinstance(v, float) else v for k, v in asdict(self).items()}


class VolterraStepper:
    """Fractional Adams PECE on a growing, possibly nonuniform set of nodes."""

    def __init__(self, rhs: Callable, y0: complex, alpha: float, *, corrections: int = 2,
                 dtype=float, capacity: int = 1024):
        self.alpha = check_order(alpha, "alpha")
        self.rhs = rhs
        self.corrections = corrections
        self.y0 = y0
        self._t = np.zeros(capacity)
        self._y = np.zeros(capacity, dtype=dtype)
        self._f = np.zeros(capacity, dtype=dtype)
        self._y[0] = y0
        self._f[0] = rhs(0.0, y0)
        self.size = 1
        self._scale = 1.0 / gamma_fn(alpha)

    @property
    def times(self) -> np.ndarray:
        return self._t[: self.size]

    @property
    def values(self) -> np.ndarray:
        return self._y[: self.size]

    def _weights(self, t_new: float):
        a = self.alpha
        nodes = self._t[: self.size]
        left = t_new - nodes
        right = np.append(left[1:], 0.0)
        widths = left - right
        rect = (left ** a - right ** a) / a
        moment = left * rect - (left ** (a + 1) - right ** (a + 1)) / (a + 1)
        lin = moment / widths
        trap = np.zeros(self.size + 1)
        trap[:-1] = rect - lin
        trap[1:] += lin
        return rect * self._scale, trap * self._scale

    def propose(self, h: float) -> complex:
        """Value at ``t_last + h`` without committing it."""
        t_new = self._t[self.size - 1] + h
        rect, trap = self._weights(t_new)
        f_hist = self._f[: self.size]
        y = self.y0 + rect @ f_hist
        base = self.y0 + trap[:-1] @ f_hist
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(self.corrections):
                y = base + trap[-1] * self.rhs(t_new, y)
        return y

    def commit(self, h: float, y) -> None:
        if self.size == self._t.size:
            grow = self._t.size
            self._t = np.concatenate([self._t, np.zeros(grow)])
            self._y = np.concatenate([self._y, np.zeros(grow, dtype=self._y.dtype)])
            self._f = np.concatenate([self._f, np.zeros(grow, dtype=self._f.dtype)])
        t_new = self._t[self.size - 1] + h
        self._t[self.size] = t_new
        self._y[self.size] = y
        self._f[self.size] = self.rhs(t_new, y)
        self.size += 1


def solve_volterra(rhs: Callable, y0: complex, alpha: float, t_end: float, step: float, *,
                   corrections: int = 2, overflow: float = OVERFLOW) -> tuple[np.ndarray, np.ndarray, bool]:
    """Integrate on the uniform grid ``0, step, ..., t_end``.

    Returns (times, values, overflowed). The run stops early if a value
    becomes non-finite or exceeds ``overflow`` in modulus.
    """
    if not step > 0 or not t_end > 0:
        raise DomainError("step and t_end must be positive")
    n = int(round(t_end / step))
    if abs(n * step - t_end) > 1e-9 * t_end:
        raise DomainError("t_end must be a multiple of step")
    dtype = complex if isinstance(y0, complex) else float
    stepper = VolterraStepper(rhs, y0, alpha, corrections=corrections, dtype=dtype, capacity=n + 1)
    # overflow in the right-hand side is expected near blow-up; non-finite values stop the run
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            y = stepper.propose(step)
            if not np.isfinite(y) or abs(y) > overflow:
                return stepper.times.copy(), stepper.values.copy(), True
            stepper.commit(step, y)
    times = np.arange(n + 1) * step
    return times, stepper.values.copy(), False


def solve_fode(problem: FodeProblem, t_end: float, step: float, *,
               corrections: int = 2, overflow: float = OVERFLOW) -> FodeSolution:
    """Trajectory of ``D^alpha g = B (g^p - A)`` on ``[0, t_end]``.

    If the solution overflows first, the returned grid stops at the last
    finite node and ``blew_up`` is set.
    """
    times, values, overflowed = solve_volterra(problem.rhs, float(problem.g0), problem.alpha,
                                               t_end, step, corrections=corrections, overflow=overflow)
    if values.size < 2:
        values = np.array([problem.g0, problem.g0])
        times = np.array([0.0, step])
    return FodeSolution(GridFunction1D(0.0, float(times[-1]), values), overflowed)


def solve_linear_fode_oracle(alpha: float, lam: complex, g0: complex, t: float) -> complex:
    r"""Exact solution :math:`g_0 E_\alpha(\lambda t^\alpha)` of :math:`{}^cD^\alpha g = \lambda g`."""
    return complex(g0) * mittag_leffler(alpha, complex(lam) * t ** alpha)


def detect_blowup(problem: FodeProblem, threshold: float = 1e8, max_refinements: int = 30, *,
                  base_steps: int = 400, growth_limit: float = 0.05,
                  horizon_factor: float = 10.0) -> BlowupEstimate:
    """Bracket the first time the solution exceeds ``threshold``.

    The base step is ``min(T_U / base_steps, T_L)``. A step is halved
    (at most ``max_refinements`` times in total) whenever it would raise the
    solution by more than ``growth_limit`` relative to its current value.
    """
    if threshold < 1e6:
        raise DomainError(f"threshold must be at least 1e6, got {threshold}")
    if problem.A != 0:
        raise DomainError("blow-up detection is defined for A = 0")
    _, _, T_L, T_U = blowup_bound_constants(problem.alpha, problem.p, problem.B, problem.g0)
    h = min(T_U / base_steps, T_L)
    horizon = horizon_factor * T_U
    stepper = VolterraStepper(problem.rhs, float(problem.g0), problem.alpha,
                              capacity=4 * base_steps)
    levels = 0
    while True:
        t_now = stepper.times[-1]
        if t_now > horizon:
            raise NoBlowupError(f"no blow-up before t = {horizon:.6g} (10 T_U)")
        y_now = stepper.values[-1]
        y = stepper.propose(h)
        finite = np.isfinite(y) and y < OVERFLOW
        too_fast = not finite or (y - y_now) > growth_limit * y_now
        if too_fast and levels < max_refinements:
            h /= 2
            levels += 1
            continue
        if not finite or y >= threshold:
            return BlowupEstimate(float(t_now), float(t_now + h), float(threshold),
                                  float(T_L), float(T_U), levels)
        stepper.commit(h, y)


@dataclass(frozen=True)
class SandwichReport:
    passed: bool
    t_last_finite: float
    t_threshold: float
    T_L: float
    T_U: float
    tolerance: float

    def to_json(self) -> dict:
        return asdict(self)


def check_sandwich(problem: FodeProblem, tol: float = 0.05, **kwargs) -> SandwichReport:
    """Check ``T_L <= bracket <= T_U (1 + tol)`` for the numerical blow-up bracket."""
    estimate = detect_blowup(problem, **kwargs)
    passed = estimate.T_L <= estimate.t_last_finite and estimate.t_threshold <= estimate.T_U * (1 + tol)
    return SandwichReport(bool(passed), estimate.t_last_finite, estimate.t_threshold,
                          estimate.T_L, estimate.T_U, tol)


@dataclass(frozen=True)
class BarrierReport:
    passed: bool
    minimum: float
    level: float
    tolerance: float
    blew_up: bool


def forcing_profile(t, seed: int = 0, modes: int = 4):
    """Smooth deterministic profile with values in [0, 1]."""
    rng = np.random.default_rng(seed)
    freqs = rng.uniform(1.0, 10.0, modes)
    phases = rng.uniform(0.0, 2 * math.pi, modes)
    t = np.asarray(t, dtype=float)
    wave = np.sum(np.sin(np.multiply.outer(t, freqs) + phases), axis=-1) / modes
    return 0.5 * (1.0 + wave)


def barrier_check(problem: FodeProblem, forcing_slack: float, t_end: float, step: float = 1e-3, *,
                  tol: float = 1e-6, seed: int = 0) -> BarrierReport:
    r"""Integrate the supersolution
    :math:`{}^cD^\alpha v = B(|v|^p - A)(1 + \text{slack}\cdot n(t))` and check
    that :math:`v` never drops below :math:`A^{1/p}`."""
    level = problem.A ** (1 / problem.p)
    if not problem.g0 > level:
        raise HypothesisError(f"g0 > A^(1/p) fails: g0={problem.g0}, A^(1/p)={level}")
    if forcing_slack < 0:
        raise DomainError("forcing slack must be nonnegative")

    def rhs(t, v):
        return problem.rhs(t, v) * (1.0 + forcing_slack * float(forcing_profile(t, seed)))

    times, values, overflowed = solve_volterra(rhs, float(problem.g0), problem.alpha, t_end, step)
    minimum = float(np.min(values))
    return BarrierReport(bool(minimum >= level - tol), minimum, level, tol, overflowed)
