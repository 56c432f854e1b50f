r"""Pseudospectral simulation of the time-fractional Schrödinger problem

.. math:: i^\alpha\,{}^cD^\alpha_{0|t}u - (-\Delta)^{\beta/2}u = \lambda|u|^p

on a periodic box :math:`[-L, L)^N`, plus the diagnostics that pair the
solution with the space test function: the functional :math:`M_R(t)`, the
weak-form residual and the differential inequality satisfied by
:math:`M_R`.

Time stepping is the L1 scheme applied to
:math:`{}^cD^\alpha u = i^{-\alpha}[(-\Delta)^{\beta/2}u + \lambda|u|^p]`,
with the Fourier multiplier treated implicitly and the nonlinearity
explicitly. The memory is kept in Fourier space.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline

from .constants import ProblemParams, barrier_level, i_power, thm6_constants
from .errors import DomainError, StepSizeError
from .frac_core import GridFunction1D, caputo_derivative, gamma_fn
from .test_functions import (SpaceTestFn, TimeTestFn, frac_laplacian_phi, phi_eval, w_eval,
                             w_right_caputo_closed)


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic grid on ``[-L, L)^N`` with ``n`` points per dimension."""

    N: int
    L: float
    n: int = 256

    def __post_init__(self):
        if self.N not in (1, 2):
            raise DomainError(f"only N in {{1, 2}} is supported, got {self.N}")
        if self.n < 64 or self.n & (self.n - 1):
            raise DomainError(f"points per dimension must be a power of two >= 64, got {self.n}")
        if not self.L > 0:
            raise DomainError(f"box half-length must be positive, got {self.L}")

    @property
    def dx(self) -> float:
        return 2 * self.L / self.n

    @property
    def cell_volume(self) -> float:
        return self.dx ** self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.N

    def axis(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.n)

    def points(self) -> np.ndarray:
        """Coordinates: shape ``(n,)`` for N = 1 and ``(n, n, 2)`` for N = 2."""
        x = self.axis()
        if self.N == 1:
            return x
        return np.stack(np.meshgrid(x, x, indexing="ij"), axis=-1)

    def radii(self) -> np.ndarray:
        pts = self.points()
        return np.abs(pts) if self.N == 1 else np.sqrt(np.sum(pts ** 2, axis=-1))

    def wavenumber_modulus(self) -> np.ndarray:
        k = 2 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        if self.N == 1:
            return np.abs(k)
        kx, ky = np.meshgrid(k, k, indexing="ij")
        return np.sqrt(kx ** 2 + ky ** 2)

    def to_json(self) -> dict:
        return {"N": self.N, "L": self.L, "n": self.n}


@dataclass(frozen=True)
class ComplexField:
    grid: SpatialGrid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != self.grid.shape:
            raise DomainError(f"field shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise DomainError("field values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, grid: SpatialGrid, func, time: float = 0.0) -> ComplexField:
        return cls(grid, np.asarray(func(grid.points()), dtype=complex) * np.ones(grid.shape), time)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.cell_volume))


def fractional_laplacian_periodic(values: np.ndarray, grid: SpatialGrid, beta: float) -> np.ndarray:
    """Apply the Fourier multiplier ``|xi|**beta`` on the periodic grid."""
    fft, ifft = _transforms(grid.N)
    return ifft(grid.wavenumber_modulus() ** beta * fft(values))


def _transforms(N: int):
    return (np.fft.fft, np.fft.ifft) if N == 1 else (np.fft.fft2, np.fft.ifft2)


@dataclass
class FieldTrajectory:
    """Snapshots of a run on a uniform time grid.

    ``history`` holds the Fourier-space increments used by the Caputo
    memory; ``blew_up`` marks a run cut short because ``max |u|`` passed the
    threshold.
    """

    grid: SpatialGrid
    params: ProblemParams
    step: float
    times: np.ndarray
    snapshots: np.ndarray
    blew_up: bool = False
    history: np.ndarray | None = field(default=None, repr=False)

    def field_at(self, index: int) -> ComplexField:
        return ComplexField(self.grid, self.snapshots[index], float(self.times[index]))

    @property
    def initial(self) -> ComplexField:
        return self.field_at(0)


def check_resolution(u0: ComplexField, tol: float = 1e-10) -> float:
    """Fraction of spectral energy in the upper third of the resolved band."""
    fft, _ = _transforms(u0.grid.N)
    power = np.abs(fft(u0.values)) ** 2
    total = np.sum(power)
    if total == 0:
        return 0.0
    modulus = u0.grid.wavenumber_modulus()
    tail = np.sum(power[modulus > (2 / 3) * modulus.max()]) / total
    if tail > tol:
        raise DomainError(f"grid does not resolve u0: spectral tail fraction {tail:.3g} > {tol:.1g}")
    return float(tail)


def simulate(params: ProblemParams, u0: ComplexField, t_end: float, step: float, *,
             blowup_threshold: float = 1e6, save_every: int = 1, resolution_tol: float = 1e-10,
             max_amplification: float = 1.0, linear_growth_limit: float = 1e6,
             linear: bool = False) -> FieldTrajectory:
    """Advance ``u0`` to ``t_end`` with a uniform step.

    Before starting, the explicit nonlinear update is checked on ``u0``:
    its amplification ``Gamma(2-alpha) step**alpha |lambda| p max|u0|**(p-1)``
    must not exceed ``max_amplification``. ``linear=True`` drops the
    nonlinear term (the ``lambda = 0`` equation); in that mode, growth of
    the discrete norm by more than ``linear_growth_limit`` in one step
    raises :class:`StepSizeError`.
    """
    if not step > 0 or not t_end > 0:
        raise DomainError("step and t_end must be positive")
    n_steps = int(round(t_end / step))
    if abs(n_steps * step - t_end) > 1e-9 * t_end:
        raise DomainError("t_end must be a multiple of step")
    check_resolution(u0, resolution_tol)
    grid = u0.grid
    alpha, beta, p = params.alpha, params.beta, params.p
    lam = 0.0 if linear else params.lam
    c = gamma_fn(2 - alpha) * step ** alpha
    amplification = c * abs(lam) * p * float(np.max(np.abs(u0.values))) ** (p - 1)
    if amplification > max_amplification:
        raise StepSizeError(f"explicit nonlinear amplification {amplification:.3g} exceeds "
                            f"{max_amplification}; reduce the step below "
                            f"{step * (max_amplification / amplification) ** (1 / alpha):.3g}")
    fft, ifft = _transforms(grid.N)
    rotation = i_power(alpha).conjugate()
    symbol = rotation * grid.wavenumber_modulus() ** beta
    k = np.arange(n_steps + 1, dtype=float)
    b = (k + 1) ** (1 - alpha) - k ** (1 - alpha)
    denom = b[0] - c * symbol
    increments = np.zeros((n_steps,) + grid.shape, dtype=complex)
    u_hat = fft(u0.values)
    u = u0.values
    saved_t = [0.0]
    saved_u = [u0.values.copy()]
    blew_up = False
    for m in range(n_steps):
        history = np.tensordot(b[m:0:-1], increments[:m], axes=1) if m else 0.0
        forcing = 0.0 if linear else c * rotation * lam * fft(np.abs(u) ** p)
        new_hat = (b[0] * u_hat - history + forcing) / denom
        if linear:
            ratio = np.linalg.norm(new_hat) / max(np.linalg.norm(u_hat), 1e-300)
            if ratio > linear_growth_limit:
                raise StepSizeError(f"norm grew by {ratio:.3g} in one step")
        increments[m] = new_hat - u_hat
        u_hat = new_hat
        u = ifft(u_hat)
        if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > blowup_threshold:
            blew_up = True
            break
        if (m + 1) % save_every == 0 or m + 1 == n_steps:
            saved_t.append((m + 1) * step)
            saved_u.append(u.copy())
    return FieldTrajectory(grid, params, step, np.array(saved_t), np.array(saved_u), blew_up,
                           increments[: len(saved_t) - 1] if save_every == 1 else None)


def compute_MR(field_: ComplexField, gamma: complex, alpha: float, fn: SpaceTestFn) -> float:
    r"""Grid quadrature of :math:`\mathrm{Re}(i^\alpha\gamma\int u\,\phi_R\,dx)`."""
    grid = field_.grid
    if fn.R > grid.L / 4:
        raise DomainError(f"R = {fn.R} exceeds L/4 = {grid.L / 4}")
    pairing = np.sum(field_.values * phi_eval(fn, grid.points())) * grid.cell_volume
    return float((i_power(alpha) * complex(gamma) * pairing).real)


def _free_laplacian_on_grid(stf: SpaceTestFn, s: float, grid: SpatialGrid) -> np.ndarray:
    radii = grid.radii()
    if grid.N == 1:
        unique, inverse = np.unique(radii, return_inverse=True)
        return frac_laplacian_phi(stf, s, unique)[inverse].reshape(radii.shape)
    table = np.linspace(0.0, radii.max(), 257)
    values = frac_laplacian_phi(stf, s, np.stack([table, 0 * table], axis=-1))
    return CubicSpline(table, values)(radii)


def weak_residual(traj: FieldTrajectory, params: ProblemParams, ttf: TimeTestFn, stf: SpaceTestFn, *,
                  space_operator: str = "free", linear: bool = False) -> float:
    r"""Mismatch of the weak formulation tested with :math:`\phi_R(x)w(t)`.

    Left side :math:`\lambda\iint|u|^p\varphi + i^\alpha\iint u_0 D^\alpha_{t|T}\varphi`,
    right side :math:`i^\alpha\iint u D^\alpha_{t|T}\varphi - \iint u(-\Delta)^{\beta/2}\varphi`.
    Space integrals are grid sums, time integrals use the trapezoidal rule on
    the snapshots in ``[0, T]``. ``space_operator="free"`` applies the
    whole-space operator to :math:`\phi_R` by quadrature; ``"periodic"`` uses
    the Fourier multiplier of the box. ``linear=True`` drops the nonlinear
    term, matching runs made with ``simulate(..., linear=True)``.
    """
    T = ttf.T
    hits = np.nonzero(np.isclose(traj.times, T, rtol=1e-9, atol=0))[0]
    if hits.size == 0:
        raise DomainError(f"trajectory has no snapshot at T = {T}")
    last = int(hits[0])
    times = traj.times[: last + 1]
    snaps = traj.snapshots[: last + 1]
    grid = traj.grid
    phi = phi_eval(stf, grid.points())
    if space_operator == "free":
        lap_phi = _free_laplacian_on_grid(stf, params.beta / 2, grid)
    elif space_operator == "periodic":
        lap_phi = fractional_laplacian_periodic(phi, grid, params.beta).real
    else:
        raise DomainError(f"unknown space operator {space_operator!r}")
    dv = grid.cell_volume
    axes = tuple(range(1, snaps.ndim))
    power_pair = np.sum(np.abs(snaps) ** params.p * phi, axis=axes) * dv
    field_pair = np.sum(snaps * phi, axis=axes) * dv
    operator_pair = np.sum(snaps * lap_phi, axis=axes) * dv
    w = w_eval(ttf, times)
    dw = w_right_caputo_closed(ttf, params.alpha, times)
    rot = i_power(params.alpha)
    lam = 0.0 if linear else params.lam
    lhs = lam * trapezoid(power_pair * w, times) + rot * field_pair[0] * trapezoid(dw, times)
    rhs = rot * trapezoid(field_pair * dw, times) - trapezoid(operator_pair * w, times)
    return float(abs(lhs - rhs))


@dataclass(frozen=True)
class Inequality38Report:
    """Margins of the growth inequality for ``M_R`` and the barrier check."""

    passed: bool
    precondition_ok: bool
    barrier_ok: bool
    M_R0: float
    level: float
    times: np.ndarray
    M_R: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    margins: np.ndarray
    tolerance: float
    initial_lhs_direct: float
    initial_rhs_direct: float

    def summary(self) -> dict:
        rel = self.margins / np.maximum(np.maximum(np.abs(self.lhs), np.abs(self.rhs)), 1e-300)
        return {"passed": self.passed, "precondition_ok": self.precondition_ok,
                "barrier_ok": self.barrier_ok, "M_R0": self.M_R0, "level": self.level,
                "min_relative_margin": float(np.min(rel)) if rel.size else None,
                "snapshots": int(self.times.size), "tolerance": self.tolerance}


def _equation_rate(snapshot: np.ndarray, params: ProblemParams, phi: np.ndarray, grid: SpatialGrid) -> float:
    r"""Caputo derivative of :math:`M_R` read off the equation:
    :math:`\mathrm{Re}(\gamma\lambda\int|u|^p\phi_R) + \mathrm{Re}(\gamma\int\phi_R(-\Delta)^{\beta/2}u)`."""
    dv = grid.cell_volume
    nonlinear = params.gamma * params.lam * np.sum(np.abs(snapshot) ** params.p * phi) * dv
    linear = params.gamma * np.sum(phi * fractional_laplacian_periodic(snapshot, grid, params.beta)) * dv
    return float((nonlinear + linear).real)


def check_inequality38(traj: FieldTrajectory, params: ProblemParams, fn: SpaceTestFn, *,
                       tol: float = 0.05, C_Nq: float | None = None) -> Inequality38Report:
    r"""Check :math:`D^\alpha_{0|t}M_R \ge D R^{-N(p-1)}[M_R - C R^{N-\beta/(p-1)}]^p`
    and the barrier :math:`M_R \ge C R^{N-\beta/(p-1)}` along the run.

    The derivative is the discrete left Caputo (L1) derivative of the
    sampled series; at ``t = 0``, where L1 has no information, the rate is
    read from the equation. A margin passes if it is at least ``-tol`` times
    the larger of the two sides.
    """
    bundle = thm6_constants(params, C_Nq)
    level = barrier_level(params, fn.R, bundle)
    growth = bundle["D_thm6"] * fn.R ** (-params.N * (params.p - 1))
    grid = traj.grid
    phi = phi_eval(fn, grid.points())
    series = np.array([compute_MR(traj.field_at(j), params.gamma, params.alpha, fn)
                       for j in range(traj.times.size)])
    M0 = float(series[0])
    rate0 = _equation_rate(traj.snapshots[0], params, phi, grid)
    direct_rhs0 = growth * (abs(M0) ** params.p - level ** params.p)
    if not M0 > level or traj.times.size < 2:
        empty = np.zeros(0)
        return Inequality38Report(False, False, False, M0, level, traj.times, series, empty, empty, empty,
                                  tol, rate0, direct_rhs0)
    caputo = caputo_derivative(GridFunction1D(0.0, float(traj.times[-1]), series), params.alpha, "left")
    lhs = caputo.samples.copy()
    lhs[0] = rate0
    rhs = growth * np.maximum(series - level, 0.0) ** params.p
    margins = lhs - rhs
    scale = np.maximum(np.abs(lhs), np.abs(rhs))
    barrier_ok = bool(np.all(series >= level))
    passed = barrier_ok and bool(np.all(margins >= -tol * scale))
    return Inequality38Report(passed, True, barrier_ok, M0, level, traj.times, series, lhs, rhs, margins,
                              tol, rate0, direct_rhs0)


def export_snapshots(traj: FieldTrajectory, directory: str | Path, *, every: int = 1) -> list[Path]:
    """Write one CSV per snapshot (coordinates, Re u, Im u) and a JSON manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    pts = traj.grid.points().reshape(-1, traj.grid.N)
    written = []
    entries = []
    for j in range(0, traj.times.size, every):
        path = directory / f"snapshot_{j:05d}.csv"
        vals = traj.snapshots[j].ravel()
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"x{d}" for d in range(traj.grid.N)] + ["re_u", "im_u"])
            for x, v in zip(pts, vals):
                writer.writerow([f"{c:.12g}" for c in x] + [f"{v.real:.12g}", f"{v.imag:.12g}"])
        written.append(path)
        entries.append({"index": j, "time": float(traj.times[j]), "file": path.name})
    manifest = directory / "manifest.json"
    p = traj.params
    manifest.write_text(json.dumps({
        "params": {"alpha": p.alpha, "beta": p.beta, "N": p.N, "p": p.p,
                   "lambda": [p.lam.real, p.lam.imag], "gamma": [p.gamma.real, p.gamma.imag]},
        "grid": traj.grid.to_json(), "step": traj.step, "blew_up": traj.blew_up,
        "snapshots": entries}, indent=2, sort_keys=True))
    written.append(manifest)
    return written


def export_mr_series(report: Inequality38Report, path: str | Path) -> Path:
    """Write ``t, M_R, lhs38, rhs38`` rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "M_R", "lhs38", "rhs38"])
        for row in zip(report.times, report.M_R, report.lhs, report.rhs):
            writer.writerow([f"{v:.12g}" for v in row])
    return path
