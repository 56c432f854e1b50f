r"""Explicit constants, thresholds and exponents of the nonexistence results.

Everything here is a pure evaluation over :class:`ProblemParams`. Values
that depend on the sampled constant of the pointwise bound
:math:`|(-\Delta)^{\beta/2}\phi|\le C\phi` are tagged ``empirical`` in the
returned :class:`ConstantBundle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate

from .errors import DomainError, HypothesisError
from .frac_core import check_order, gamma_fn
from .test_functions import (SpaceTestFn, a0_mass, default_eta, lemma2_constants,
                             lemma3_empirical_constant, phi_eval, sphere_area)


@dataclass(frozen=True)
class ProblemParams:
    """Parameters of the fractional Schrödinger problem and its data hypotheses.

    ``lam`` is the nonlinearity coefficient, ``epsilon`` the data amplitude,
    ``gamma`` the pairing multiplier of the functional method, ``s`` the
    Sobolev index of the data and ``k`` its decay or singularity exponent.
    """

    alpha: float
    beta: float
    N: int
    p: float
    lam: complex = 1.0
    epsilon: float = 1.0
    gamma: complex = 1.0
    s: float = 0.0
    k: float | None = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 < self.beta < 2:
            raise DomainError(f"beta must lie in (0, 2), got {self.beta}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        if not self.p > 1:
            raise DomainError(f"p must exceed 1, got {self.p}")
        if complex(self.lam) == 0:
            raise DomainError("lambda must be nonzero")
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")
        if not self.s >= 0:
            raise DomainError(f"s must be nonnegative, got {self.s}")
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "gamma", complex(self.gamma))
        object.__setattr__(self, "N", int(self.N))

    def with_(self, **changes) -> ProblemParams:
        return replace(self, **changes)

    @property
    def q(self) -> float:
        """Decay exponent of the space test function, N + beta."""
        return self.N + self.beta


@dataclass(frozen=True)
class ConstantBundle:
    """Named constants with a provenance flag (``exact`` or ``empirical``)."""

    values: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> float:
        return self.values[name]

    def __contains__(self, name: str) -> bool:
        return name in self.values

    def get(self, name: str, default=None):
        return self.values.get(name, default)

    def merged(self, other: ConstantBundle) -> ConstantBundle:
        return ConstantBundle({**self.values, **other.values},
                              {**self.provenance, **other.provenance})

    def to_json(self) -> dict:
        return {name: {"value": float(self.values[name]), "provenance": self.provenance[name]}
                for name in sorted(self.values)}


class _Builder:
    def __init__(self):
        self.values: dict[str, float] = {}
        self.provenance: dict[str, str] = {}

    def put(self, name: str, value: float, empirical: bool) -> float:
        value = float(value)
        if not math.isfinite(value):
            raise HypothesisError(f"{name} is not finite under the given hypotheses")
        self.values[name] = value
        self.provenance[name] = "empirical" if empirical else "exact"
        return value

    def bundle(self) -> ConstantBundle:
        return ConstantBundle(dict(self.values), dict(self.provenance))


def i_power(alpha: float) -> complex:
    r"""Principal value :math:`i^\alpha = \cos(\alpha\pi/2) + i\sin(\alpha\pi/2)`."""
    return complex(math.cos(alpha * math.pi / 2), math.sin(alpha * math.pi / 2))


def critical_exponents(N: int, beta: float, s: float = 0.0) -> tuple[float, float]:
    """Fujita exponent ``1 + beta/N`` and the scaling-critical ``1 + 2 beta/(N - 2s)``."""
    if not N >= 1:
        raise DomainError(f"N must be at least 1, got {N}")
    if not 0 < beta < 2:
        raise DomainError(f"beta must lie in (0, 2), got {beta}")
    if not 0 <= s < N / 2:
        raise DomainError(f"need 0 <= s < N/2, got s={s}")
    return 1 + beta / N, 1 + 2 * beta / (N - 2 * s)


@dataclass(frozen=True)
class DataDecomposition:
    """Real and imaginary parts of the data and of its rotation by ``i**alpha``."""

    g: np.ndarray
    h: np.ndarray
    G1: np.ndarray
    G2: np.ndarray


def decompose_initial_data(u0, alpha: float) -> DataDecomposition:
    """Split ``u0`` and rotate: ``G1 + i G2 = i**alpha * u0``."""
    values = np.asarray(getattr(u0, "values", u0), dtype=complex)
    c, s = math.cos(alpha * math.pi / 2), math.sin(alpha * math.pi / 2)
    g, h = values.real, values.imag
    return DataDecomposition(g, h, c * g - s * h, c * h + s * g)


def blowup_bound_constants(alpha: float, p: float, B: float, f0: float) -> tuple[float, float, float, float]:
    r"""Growth factors and the two-sided blow-up time bounds for
    :math:`{}^cD^\alpha f = B f^p`, :math:`f(0) = f_0`.

    Returns :math:`(G(p), H(p,\alpha), T_L, T_U)` with
    :math:`G = \min(2^p, p^p/(p-1)^{p-1})`,
    :math:`H = \max(p-1, 2^{-p\alpha/(p-1)})` and
    :math:`T = (\Gamma(1+\alpha)/(B f_0^{p-1} X))^{1/\alpha}` for
    :math:`X = G` (lower) or :math:`X = H` (upper).
    """
    alpha = check_order(alpha, "alpha")
    if not p > 1:
        raise HypothesisError(f"p > 1 fails: p={p}")
    if not B > 0:
        raise HypothesisError(f"B > 0 fails: B={B}")
    if not f0 > 0:
        raise HypothesisError(f"f(0) > 0 fails: f0={f0}")
    growth = min(2.0 ** p, p ** p / (p - 1) ** (p - 1))
    decay = max(p - 1, 2.0 ** (-p * alpha / (p - 1)))
    base = gamma_fn(1 + alpha) / (B * f0 ** (p - 1))
    return growth, decay, (base / growth) ** (1 / alpha), (base / decay) ** (1 / alpha)


def selected_lambda(params: ProblemParams, sign_case: str = "lambda1_G1") -> float:
    """Modulus of the real or imaginary part of lambda picked by the sign case.

    The four sign cases of the test-function argument reduce to one after
    replacing lambda_j by |lambda_j| and G_j by sign(lambda_j) G_j.
    """
    if sign_case == "lambda1_G1":
        value = params.lam.real
    elif sign_case == "lambda2_G2":
        value = params.lam.imag
    else:
        raise DomainError(f"sign case {sign_case!r} has no lambda component")
    if value == 0:
        raise HypothesisError(f"the selected component of lambda vanishes ({sign_case})")
    return abs(value)


def _space_fn(params: ProblemParams) -> SpaceTestFn:
    return SpaceTestFn(params.N, params.q)


def empirical_C(params: ProblemParams) -> float:
    """Sampled constant of the pointwise bound for ``q = N + beta``."""
    return lemma3_empirical_constant(_space_fn(params), params.beta / 2)


def testfn_method_constants(params: ProblemParams, eta: float | None = None,
                            C_Nq: float | None = None, *, eps_young: float | None = None,
                            sign_case: str = "lambda1_G1") -> ConstantBundle:
    r"""Constants of the test-function argument and of the lifespan bounds built on it.

    ``C_0`` follows the closed expression
    :math:`2^{1/(p-1)}/(p^{p/(p-1)}C_2)\max\{C_1 2^{p/(p-1)}, C^{p/(p-1)}/(\eta+1)\}`;
    ``C_0_chain`` is what the chain :math:`C_8 = C_0 A_0\lambda^{-1/(p-1)}` yields
    from :math:`C_\varepsilon,\dots,C_8` with :math:`\varepsilon=\lambda/2`.
    When ``k`` is set, the exponent :math:`\kappa_0` and the small and large data
    thresholds are added.
    """
    alpha, beta, N, p = params.alpha, params.beta, params.N, params.p
    lam = selected_lambda(params, sign_case)
    eta = default_eta(alpha, p) if eta is None else float(eta)
    empirical = C_Nq is None
    if C_Nq is None:
        C_Nq = empirical_C(params)
    conj = p / (p - 1)
    out = _Builder()
    A0 = out.put("A_0", a0_mass(_space_fn(params)), False)
    out.put("C_Nq_empirical" if empirical else "C_Nq", C_Nq, empirical)
    C1, C2 = lemma2_constants(alpha, p, eta)
    out.put("C_1", C1, False)
    out.put("C_2", C2, False)
    eps = lam / 2 if eps_young is None else float(eps_young)
    if not eps > 0:
        raise HypothesisError(f"Young parameter must be positive, got {eps}")
    C_eps = out.put("C_eps", (p - 1) * (p * eps) ** (-1 / (p - 1)) / p, False)
    C3 = out.put("C_3", C_Nq ** conj * A0, empirical)
    C4 = out.put("C_4", 2 ** conj * C_eps, False)
    C5 = out.put("C_5", C_eps, False)
    C6 = out.put("C_6", C1 * C4 * A0, False)
    C7 = out.put("C_7", C3 * C5 / (eta + 1), empirical)
    C8 = out.put("C_8", max(C6, C7) / C2, empirical)
    C0 = out.put("C_0", 2 ** (1 / (p - 1)) / (p ** conj * C2) * max(C1 * 2 ** conj, C_Nq ** conj / (eta + 1)),
                 empirical)
    out.put("C_0_chain", C8 * lam ** (1 / (p - 1)) / A0, empirical)
    out.put("eta", eta, False)
    if params.k is not None:
        k = params.k
        kappa0 = 1 / (p - 1) - k / beta
        if not kappa0 > 0:
            raise HypothesisError(f"k >= beta/(p-1) (k={k}, beta/(p-1)={beta / (p - 1):.6g})")
        out.put("kappa_0", kappa0, False)
        omega = sphere_area(N)
        common = C0 * omega ** -1 * 2 ** ((N + beta) / 2) * A0 * lam ** ((p - 2) / (p - 1))
        B0 = out.put("B_0", ((k + beta) * common) ** (1 / (alpha * kappa0)), empirical)
        out.put("eps_0", B0 ** (alpha * kappa0), empirical)
        if k < N:
            out.put("C_bar", ((N - k) * common) ** (1 / (alpha * kappa0)), empirical)
            out.put("eps_1", (N - k) * common, empirical)
    return out.bundle()


def thm6_constants(params: ProblemParams, C_Nq: float | None = None) -> ConstantBundle:
    r"""Constants of the functional method built on
    :math:`M_R(t) = \mathrm{Re}(i^\alpha\gamma\int u\,\phi_R\,dx)`.

    Barrier constant :math:`C` with
    :math:`C^p = 2C_{1/2}\mathrm{Re}(\gamma\lambda)^{-p/(p-1)}|\gamma|^{p^2/(p-1)}A_0^p C_{N,N+\beta}^{p/(p-1)}`,
    growth constant :math:`D = \mathrm{Re}(\gamma\lambda)|\gamma|^{-p}A_0^{1-p}/2`,
    and, when ``k`` is set, the data thresholds and lifespan prefactors.
    """
    alpha, beta, N, p = params.alpha, params.beta, params.N, params.p
    re_gl = (params.gamma * params.lam).real
    if not re_gl > 0:
        raise HypothesisError(f"Re(gamma*lambda) > 0 fails: Re(gamma*lambda)={re_gl:.6g}")
    empirical = C_Nq is None
    if C_Nq is None:
        C_Nq = empirical_C(params)
    conj = p / (p - 1)
    gabs = abs(params.gamma)
    out = _Builder()
    A0 = out.put("A_0", a0_mass(_space_fn(params)), False)
    out.put("C_Nq_empirical" if empirical else "C_Nq", C_Nq, empirical)
    C_half = out.put("C_half", (p - 1) * p ** (-conj) * 2 ** (1 / (p - 1)), False)
    C6 = out.put("C_thm6", (2 * C_half * re_gl ** (-conj) * gabs ** (p * conj) * A0 ** p * C_Nq ** conj) ** (1 / p),
                 empirical)
    D6 = out.put("D_thm6", 0.5 * re_gl * gabs ** (-p) * A0 ** (-(p - 1)), False)
    omega = sphere_area(N)
    prefactor = ((p - 1) * D6) ** (-1 / alpha) * gamma_fn(1 + alpha) ** (1 / alpha)
    if params.k is not None:
        k = params.k
        kappa1 = 1 / (p - 1) - min(N, k) / beta
        if kappa1 > 0:
            out.put("kappa_1", kappa1, False)
            if k < N:
                I1 = out.put("I_1", 2.0 ** (-N - beta - 1) * omega / (N - k), False)
                out.put("eps_2", C6 / I1 * 2 ** (1 - beta * kappa1 / (N - k)), empirical)
            else:
                radial, _ = integrate.quad(lambda r: r ** (N - 1 - k), 1, 2)
                I1 = out.put("I_1", 2.0 ** (-N - beta) * omega * radial, False)
                out.put("eps_2", C6 / I1 * 2 ** (1 - beta * kappa1), empirical)
            out.put("B_1", prefactor * 2 ** (1 / (alpha * kappa1))
                    * C6 ** (min(N, k) * (p - 1) / (alpha * beta * kappa1)) * I1 ** (-1 / (alpha * kappa1)),
                    empirical)
        kappa0 = 1 / (p - 1) - k / beta
        if kappa0 > 0:
            out.put("kappa_0", kappa0, False)
        if k < N:
            I2 = out.put("I_2", 2.0 ** (-N - beta) * omega / (N - k), False)
            out.put("eps_3", 2 * C6 / I2, empirical)
            if kappa0 > 0:
                out.put("B_2", prefactor * 2 ** (1 / (alpha * kappa0))
                        * C6 ** (k * (p - 1) / (alpha * beta * kappa0)) * I2 ** (-1 / (alpha * kappa0)),
                        empirical)
    return out.bundle()


def barrier_level(params: ProblemParams, R: float, bundle: ConstantBundle) -> float:
    """Level ``C R**(N - beta/(p-1))`` that the functional must exceed."""
    return bundle["C_thm6"] * R ** (params.N - params.beta / (params.p - 1))


def M_R_zero(u0, gamma: complex, alpha: float, fn: SpaceTestFn, *, radial: bool = False,
             breakpoints: tuple = ()) -> float:
    r""":math:`\mathrm{Re}(i^\alpha\gamma\int u_0\phi_R\,dx)` by quadrature.

    ``u0`` is either a sampled field (anything with ``grid`` and ``values``)
    or a callable. Callables take a scalar for ``N = 1``; for ``N >= 2`` they
    must be radial (``radial=True``) and take ``|x|``. Quadrature is split at
    0, the scale ``R`` and any extra ``breakpoints``.
    """
    factor = i_power(alpha) * complex(gamma)
    if hasattr(u0, "grid") and hasattr(u0, "values"):
        weights = phi_eval(fn, u0.grid.points())
        pairing = np.sum(np.asarray(u0.values) * weights) * u0.grid.cell_volume
        return float((factor * pairing).real)
    if not callable(u0):
        raise DomainError("u0 must be a sampled field or a callable")
    R = fn.R

    def integrand(x):
        return (factor * complex(u0(x))).real * phi_eval(fn, x)

    if fn.N == 1:
        cuts = sorted({0.0, R, -R, *map(float, breakpoints), *(-float(b) for b in breakpoints)})
        edges = [-np.inf] + cuts + [np.inf]
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(integrand, a, b, epsabs=1e-13, epsrel=1e-10, limit=400)
            total += val
        return float(total)
    if not radial:
        raise DomainError("for N >= 2 pass a radial callable (radial=True) or a sampled field")
    cuts = sorted({0.0, R, *map(float, breakpoints)})
    edges = cuts + [np.inf]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(lambda r: r ** (fn.N - 1) * (factor * complex(u0(r))).real
                                * (1 + (r / R) ** 2) ** (-fn.q / 2), a, b, epsabs=1e-13, epsrel=1e-10, limit=400)
        total += val
    return float(sphere_area(fn.N) * total)
