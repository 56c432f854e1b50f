"""Which nonexistence result applies to a parameter set, and with what bound.

A :class:`DataProfile` declares the shape of the data (integrable, or with a
pointwise power-law lower bound outside or inside the unit ball) and how its
sign is paired with the nonlinearity. :func:`classify` evaluates every
hypothesis of every candidate result and returns a :class:`RegimeVerdict`
whose ``primary`` entry has the strongest conclusion
(local nonexistence > lifespan bound > global nonexistence).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize

from .constants import (ProblemParams, M_R_zero, barrier_level, blowup_bound_constants,
                        critical_exponents, i_power, selected_lambda, testfn_method_constants,
                        thm6_constants)
from .errors import DomainError, HypothesisError
from .fode import FodeProblem, detect_blowup
from .test_functions import SpaceTestFn, sphere_area

KINDS = ("integrable_L1", "sobolev_Hs", "outer_singular", "inner_singular")
SIGN_CASES = ("lambda1_G1", "lambda2_G2", "gamma_pairing")
THEOREMS = ("T1_subcritical", "T1_critical", "T2_small_data", "T3_large_data", "T4_supercritical_L2",
            "T5_supercritical_L1", "T6_functional", "C1", "C2", "C3", "none")
STRENGTH = {"local_nonexistence": 3, "lifespan_upper": 2, "global_nonexistence": 1}


@dataclass(frozen=True)
class DataProfile:
    """Declared shape of the initial data.

    ``margin`` is the data-side number a hypothesis needs: for integrable
    kinds the signed integral (``lambda_j int G_j`` or
    ``Re(i^alpha gamma int u0)``); for pointwise kinds the relative excess
    of the lower bound (the bound holds iff ``margin >= 0``). ``None`` means
    the number is unknown and must come from a supplied field.
    """

    kind: str
    k: Optional[float] = None
    s: float = 0.0
    sign_case: str = "lambda1_G1"
    margin: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown data kind {self.kind!r}")
        if self.sign_case not in SIGN_CASES:
            raise DomainError(f"unknown sign case {self.sign_case!r}")
        if self.kind in ("outer_singular", "inner_singular") and self.k is None:
            raise DomainError(f"{self.kind} data needs an exponent k")


@dataclass(frozen=True)
class InitialData:
    """Callable data for quadrature-based checks.

    ``func`` takes a scalar for ``N = 1`` and ``|x|`` when ``radial`` is set.
    """

    func: Callable
    radial: bool = False
    breakpoints: tuple = ()


@dataclass(frozen=True)
class Condition:
    name: str
    holds: Optional[bool]
    margin: Optional[float]
    note: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "holds": self.holds, "margin": _round(self.margin)}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Bound:
    kind: str
    value: Optional[float]
    formula_id: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "value": _round(self.value), "formula_id": self.formula_id}


@dataclass(frozen=True)
class Candidate:
    theorem: str
    conditions: tuple
    bound: Optional[Bound]
    status: str

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "status": self.status,
                "conditions": [c.to_json() for c in self.conditions],
                "bound": self.bound.to_json() if self.bound else None}


@dataclass(frozen=True)
class RegimeVerdict:
    theorem: str
    conditions: tuple
    bound: Optional[Bound]
    status: str
    band: str
    candidates: tuple = field(default=())

    @property
    def applicable(self) -> list[str]:
        return [c.theorem for c in self.candidates if c.status == "applies"]

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "status": self.status, "band": self.band,
                "ordering": "local_nonexistence > lifespan_upper > global_nonexistence",
                "conditions": [c.to_json() for c in self.conditions],
                "bound": self.bound.to_json() if self.bound else None,
                "applicable": self.applicable,
                "candidates": [c.to_json() for c in self.candidates]}


def _round(value):
    if value is None:
        return None
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f"{value:.10g}")


def _interval(name: str, low: float, value: float, high: float) -> Condition:
    margin = min(value - low, high - value)
    return Condition(name, bool(low < value < high), margin)


def _greater(name: str, value: float, threshold: float, *, strict: bool = True) -> Condition:
    holds = value > threshold if strict else value >= threshold
    return Condition(name, bool(holds), value - threshold)


def _unknown(name: str, note: str = "insufficient data") -> Condition:
    return Condition(name, None, None, note)


def exponent_band(params: ProblemParams, s: float = 0.0) -> str:
    """Exactly one of ``p<p_F``, ``p=p_F``, ``p_F<p<=p_s``, ``p>p_s``."""
    pF = 1 + params.beta / params.N
    ps = critical_exponents(params.N, params.beta, s)[1] if s < params.N / 2 else math.inf
    p = params.p
    if math.isclose(p, pF, rel_tol=1e-12):
        return "p=p_F"
    if p < pF:
        return "p<p_F"
    return "p_F<p<=p_s" if p <= ps else "p>p_s"


# data-side quadrature ---------------------------------------------------------

def signed_data_integral(params: ProblemParams, data: InitialData, sign_case: str) -> float:
    """``sign(lambda_j) lambda_j int G_j`` style number for the chosen case.

    For the lambda cases this is ``lambda_j int G_j``; for the gamma pairing
    it is ``Re(i^alpha gamma int u0)``.
    """
    rot = i_power(params.alpha)
    if sign_case == "lambda1_G1":
        weight = params.lam.real * rot
        part = "real"
    elif sign_case == "lambda2_G2":
        weight = params.lam.imag * rot
        part = "imag"
    else:
        weight = rot * params.gamma
        part = "real"

    def density(x):
        v = weight * complex(data.func(x))
        return v.real if part == "real" else v.imag

    if params.N == 1:
        cuts = sorted({0.0, 1.0, -1.0, *data.breakpoints, *(-b for b in data.breakpoints)})
        edges = [-np.inf] + cuts + [np.inf]
        return float(sum(integrate.quad(density, a, b, limit=400)[0] for a, b in zip(edges[:-1], edges[1:])))
    if not data.radial:
        raise DomainError("N >= 2 needs radial data")
    edges = sorted({0.0, 1.0, *data.breakpoints}) + [np.inf]
    total = sum(integrate.quad(lambda r: r ** (params.N - 1) * density(r), a, b, limit=400)[0]
                for a, b in zip(edges[:-1], edges[1:]))
    return float(sphere_area(params.N) * total)


def _maximize_log_r(func, log_bounds: tuple, scan: int) -> tuple[float, float]:
    """Coarse scan over ``log R`` followed by a bounded scalar search."""
    grid = np.linspace(*log_bounds, scan)
    values = np.array([func(x) for x in grid])
    best = int(np.argmax(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, scan - 1)]
    res = optimize.minimize_scalar(lambda x: -func(x), bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-6})
    if -res.fun >= values[best]:
        return float(-res.fun), float(res.x)
    return float(values[best]), float(grid[best])


def search_functional_margin(params: ProblemParams, data: InitialData, bundle, *,
                             log_bounds: tuple = (-6.0, 6.0), scan: int = 25,
                             objective: str = "margin") -> tuple[float, float]:
    """Search ``log R`` in ``log_bounds`` for the barrier condition.

    ``objective="margin"`` maximizes ``M_R(0) - C R^(N - beta/(p-1))``;
    ``objective="lifespan"`` maximizes ``margin / R^N`` over the radii with
    positive margin, which minimizes the resulting blow-up time bound.
    Returns (margin at the best R, best R).
    """
    N, q = params.N, params.q

    def margin(log_r):
        R = math.exp(log_r)
        fn = SpaceTestFn(N, q, R)
        M0 = M_R_zero(data.func, params.gamma, params.alpha, fn, radial=data.radial,
                      breakpoints=data.breakpoints)
        return M0 - barrier_level(params, R, bundle)

    if objective == "margin":
        _, log_r = _maximize_log_r(margin, log_bounds, scan)
    elif objective == "lifespan":
        def score(log_r):
            m = margin(log_r)
            return math.log(m) - N * log_r if m > 0 else -1e6 + m
        _, log_r = _maximize_log_r(score, log_bounds, scan)
    else:
        raise DomainError(f"unknown objective {objective!r}")
    return margin(log_r), math.exp(log_r)


# candidate evaluation -----------------------------------------------------------

def _data_condition(name: str, profile: DataProfile, params: ProblemParams,
                    data: Optional[InitialData]) -> tuple[Condition, Optional[float]]:
    """Condition on the data integral (integrable kinds)."""
    value = profile.margin
    if value is None and data is not None:
        value = signed_data_integral(params, data, profile.sign_case)
    if value is None:
        return _unknown(name), None
    return _greater(name, value, 0.0), value


def _pointwise_condition(name: str, profile: DataProfile) -> Condition:
    if profile.margin is None:
        return _unknown(name)
    return Condition(name, bool(profile.margin >= 0), profile.margin)


def _lambda_component(params: ProblemParams, profile: DataProfile) -> Condition:
    try:
        value = selected_lambda(params, profile.sign_case)
    except HypothesisError:
        value = 0.0
    return _greater("selected component of lambda nonzero", value, 0.0)


def _status(conditions) -> str:
    if any(c.note == "vacuous" for c in conditions):
        return "vacuous-hypothesis"
    if all(c.holds for c in conditions):
        return "applies"
    if any(c.holds is None for c in conditions) and not any(c.holds is False for c in conditions):
        return "insufficient-data"
    return "fails"


def _finish(theorem: str, conditions: list, bound_fn) -> Candidate:
    status = _status(conditions)
    bound = bound_fn() if status == "applies" else None
    return Candidate(theorem, tuple(conditions), bound, status)


def _gamma_condition(params: ProblemParams) -> Condition:
    return _greater("Re(gamma lambda) > 0", (params.gamma * params.lam).real, 0.0)


def _candidates(params: ProblemParams, profile: DataProfile, data: Optional[InitialData],
                eta, C_Nq) -> list[Candidate]:
    alpha, beta, N, p, eps = params.alpha, params.beta, params.N, params.p, params.epsilon
    pF = 1 + beta / N
    band = exponent_band(params, profile.s)
    k = profile.k
    critical_k = beta / (p - 1)
    params_k = params.with_(k=k, s=profile.s)
    out: list[Candidate] = []
    lam_case = profile.sign_case != "gamma_pairing"

    if lam_case and profile.kind in ("integrable_L1", "sobolev_Hs"):
        if band == "p<p_F":
            conds = [_greater("p < p_F", pF, p), _lambda_component(params, profile)]
            data_cond, _ = _data_condition("signed data integral > 0", profile, params, data)
            conds.append(data_cond)
            out.append(_finish("T1_subcritical", conds,
                               lambda: Bound("global_nonexistence", None, "T1_subcritical:no-global-solution")))
        elif band == "p=p_F":
            conds = [Condition("p = p_F", True, 0.0), _lambda_component(params, profile)]
            if conds[1].holds:
                bundle = testfn_method_constants(params, eta, C_Nq, sign_case=profile.sign_case)
                lam = selected_lambda(params, profile.sign_case)
                value = profile.margin
                if value is None and data is not None:
                    value = signed_data_integral(params, data, profile.sign_case)
                threshold = bundle["C_0"] * bundle["A_0"]
                if value is None:
                    conds.append(_unknown("critical data integral > C_0 A_0"))
                else:
                    conds.append(_greater("critical data integral > C_0 A_0",
                                          lam ** ((2 - p) / (p - 1)) * value, threshold))
            out.append(_finish("T1_critical", conds,
                               lambda: Bound("global_nonexistence", None, "T1_critical:no-global-solution")))

    if lam_case and profile.kind == "outer_singular":
        conds = [_greater("p < 1 + 2 beta/N", 1 + 2 * beta / N, p),
                 _interval("N/2 < k < beta/(p-1)", N / 2, k, critical_k),
                 _lambda_component(params, profile),
                 _pointwise_condition("outer power-law lower bound", profile)]
        if conds[1].holds is False and N / 2 >= critical_k:
            conds[1] = Condition(conds[1].name, False, conds[1].margin, "vacuous")

        def t2_bound():
            bundle = testfn_method_constants(params_k, eta, C_Nq, sign_case=profile.sign_case)
            return Bound("lifespan_upper", lifespan_theorem2(bundle, alpha, eps), "T2:B_0*eps^(-1/(alpha*kappa_0))|1")
        out.append(_finish("T2_small_data", conds, t2_bound))

    if lam_case and profile.kind == "inner_singular":
        upper3 = min(N / 2 - profile.s, critical_k)
        conds = [_greater("k < min(N/2 - s, beta/(p-1))", upper3, k),
                 _lambda_component(params, profile),
                 _pointwise_condition("inner power-law lower bound", profile)]
        if all(c.holds for c in conds):
            bundle = testfn_method_constants(params_k, eta, C_Nq, sign_case=profile.sign_case)
            conds.append(_greater("epsilon > eps_1", eps, bundle["eps_1"]))
        else:
            conds.append(_unknown("epsilon > eps_1", "not evaluated: earlier hypothesis fails"))

        def t3_bound():
            bundle = testfn_method_constants(params_k, eta, C_Nq, sign_case=profile.sign_case)
            kappa0 = bundle["kappa_0"]
            return Bound("lifespan_upper", bundle["C_bar"] * eps ** (-1 / (alpha * kappa0)),
                         "T3:C_bar*eps^(-1/(alpha*kappa_0))")
        out.append(_finish("T3_large_data", conds, t3_bound))

        if profile.s < N / 2:
            ps = critical_exponents(N, beta, profile.s)[1]
            k_cond = _interval("beta/(p-1) < k < N/2 - s", critical_k, k, N / 2 - profile.s)
            if critical_k >= N / 2 - profile.s:
                k_cond = Condition(k_cond.name, False, k_cond.margin, "vacuous")
            conds = [_greater("p > p_s", p, ps), k_cond, _lambda_component(params, profile),
                     _pointwise_condition("inner power-law lower bound", profile)]
            out.append(_finish("T4_supercritical_L2", conds,
                               lambda: Bound("local_nonexistence", 0.0, "T4:no-local-solution")))
        conds = [_greater("p > p_F", p, pF), _interval("beta/(p-1) < k < N", critical_k, k, N),
                 _lambda_component(params, profile), _pointwise_condition("inner power-law lower bound", profile)]
        if critical_k >= N:
            conds[1] = Condition(conds[1].name, False, conds[1].margin, "vacuous")
        out.append(_finish("T5_supercritical_L1", conds,
                           lambda: Bound("local_nonexistence", 0.0, "T5:no-local-solution")))

    if not lam_case:
        gamma_ok = _gamma_condition(params)
        if profile.kind in ("integrable_L1", "sobolev_Hs") and band == "p<p_F":
            data_cond, _ = _data_condition("Re(i^alpha gamma int u0) > 0", profile, params, data)
            conds = [_greater("p < p_F", pF, p), gamma_ok, data_cond]
            out.append(_finish("C1", conds,
                               lambda: Bound("global_nonexistence", None, "C1:no-global-solution")))
        if profile.kind == "outer_singular":
            conds = [_greater("p < 1 + 2 beta/N", 1 + 2 * beta / N, p),
                     _interval("N/2 < k < beta/(p-1)", N / 2, k, critical_k), gamma_ok,
                     _pointwise_condition("outer power-law lower bound (gamma pairing)", profile)]
            if conds[1].holds is False and N / 2 >= critical_k:
                conds[1] = Condition(conds[1].name, False, conds[1].margin, "vacuous")
            if all(c.holds for c in conds):
                bundle = thm6_constants(params_k, C_Nq)
                conds.append(Condition("epsilon <= eps_2", bool(eps <= bundle["eps_2"]), bundle["eps_2"] - eps))
            else:
                conds.append(_unknown("epsilon <= eps_2", "not evaluated: earlier hypothesis fails"))

            def c2_bound():
                bundle = thm6_constants(params_k, C_Nq)
                return Bound("lifespan_upper", bundle["B_1"] * eps ** (-1 / (alpha * bundle["kappa_1"])),
                             "C2:B_1*eps^(-1/(alpha*kappa_1))")
            out.append(_finish("C2", conds, c2_bound))
        if profile.kind == "inner_singular":
            conds = [_greater("k < min(N/2 - s, beta/(p-1))", min(N / 2 - profile.s, critical_k), k), gamma_ok,
                     _pointwise_condition("inner power-law lower bound (gamma pairing)", profile)]
            if all(c.holds for c in conds):
                bundle = thm6_constants(params_k, C_Nq)
                conds.append(_greater("epsilon >= eps_3", eps, bundle["eps_3"], strict=False))
            else:
                conds.append(_unknown("epsilon >= eps_3", "not evaluated: earlier hypothesis fails"))

            def c3_bound():
                bundle = thm6_constants(params_k, C_Nq)
                return Bound("lifespan_upper", bundle["B_2"] * eps ** (-1 / (alpha * bundle["kappa_0"])),
                             "C3:B_2*eps^(-1/(alpha*kappa_0))")
            out.append(_finish("C3", conds, c3_bound))
        conds = [gamma_ok]
        found = {}
        if data is None:
            conds.append(_unknown("M_R(0) exceeds barrier for some R"))
        elif gamma_ok.holds:
            bundle = thm6_constants(params, C_Nq)
            margin, R = search_functional_margin(params, _scaled(data, eps), bundle)
            found = {"R": R, "margin": margin, "bundle": bundle}
            if margin > 0:
                conds.append(Condition("M_R(0) exceeds barrier for some R", True, margin))
            else:
                conds.append(Condition("M_R(0) exceeds barrier for some R", None, margin, "not verified"))
        else:
            conds.append(_unknown("M_R(0) exceeds barrier for some R", "not evaluated: earlier hypothesis fails"))

        def t6_bound():
            bundle = found["bundle"]
            margin, R = search_functional_margin(params, _scaled(data, eps), bundle, objective="lifespan")
            B = bundle["D_thm6"] * R ** (-N * (p - 1))
            T_U = blowup_bound_constants(alpha, p, B, margin)[3]
            return Bound("lifespan_upper", T_U, "T6:T_U(D*R^(-N(p-1)), M_R(0)-C*R^(N-beta/(p-1)))")
        out.append(_finish("T6_functional", conds, t6_bound))
    return out


def _scaled(data: InitialData, eps: float) -> InitialData:
    if eps == 1.0:
        return data
    return InitialData(lambda x: eps * data.func(x), data.radial, data.breakpoints)


def check_conditions(params: ProblemParams, profile: DataProfile, u0: Optional[InitialData] = None, *,
                     eta: float | None = None, C_Nq: float | None = None) -> list[Condition]:
    """All hypotheses of every candidate result, flattened (duplicates dropped)."""
    seen = {}
    for cand in _candidates(params, profile, u0, eta, C_Nq):
        for cond in cand.conditions:
            seen.setdefault(cond.name, cond)
    return list(seen.values())


def classify(params: ProblemParams, profile: DataProfile, u0: Optional[InitialData] = None, *,
             eta: float | None = None, C_Nq: float | None = None) -> RegimeVerdict:
    """Evaluate every candidate result and pick the strongest applicable one."""
    band = exponent_band(params, profile.s) if profile.s < params.N / 2 else exponent_band(params)
    candidates = _candidates(params, profile, u0, eta, C_Nq)
    applicable = [c for c in candidates if c.status == "applies"]
    if applicable:
        order = {name: i for i, name in enumerate(THEOREMS)}
        best = max(applicable, key=lambda c: (STRENGTH[c.bound.kind],
                                              -(c.bound.value if c.bound.value is not None else 0.0),
                                              -order[c.theorem]))
        return RegimeVerdict(best.theorem, best.conditions, best.bound, "applies", band, tuple(candidates))
    conditions = tuple(c for cand in candidates for c in cand.conditions)
    status = "vacuous-hypothesis" if any(c.status == "vacuous-hypothesis" for c in candidates) else "none"
    return RegimeVerdict("none", conditions, None, status, band, tuple(candidates))


def lifespan_theorem2(bundle, alpha: float, eps: float) -> float:
    """Piecewise small-data lifespan bound: ``B_0 eps^(-1/(alpha kappa_0))`` below ``eps_0``, else 1."""
    if eps >= bundle["eps_0"]:
        return 1.0
    return bundle["B_0"] * eps ** (-1 / (alpha * bundle["kappa_0"]))


def lifespan_bound(params: ProblemParams, profile: DataProfile, eps: float, *,
                   eta: float | None = None, C_Nq: float | None = None,
                   u0: Optional[InitialData] = None) -> float:
    """Lifespan bound of the primary verdict at data amplitude ``eps``."""
    verdict = classify(params.with_(epsilon=eps), profile, u0, eta=eta, C_Nq=C_Nq)
    if verdict.bound is None or verdict.bound.kind != "lifespan_upper":
        raise DomainError(f"verdict {verdict.theorem} ({verdict.status}) carries no lifespan bound")
    return verdict.bound.value


@dataclass(frozen=True)
class FunctionalBracket:
    """Blow-up bracket of the comparison ODE driven by the functional ``M_R``."""

    R: float
    M_R0: float
    level: float
    B: float
    t_last_finite: float
    t_threshold: float

    def to_json(self) -> dict:
        return {k: _round(v) for k, v in asdict(self).items()}


def corollary_radius(params: ProblemParams, eps: float, bundle, *, regime: str) -> float:
    """Scale at which ``eps I R^(N-k)`` reaches twice the barrier.

    ``regime="large"`` uses the inner constant ``I_2`` and exponent
    ``kappa_0``; ``regime="small"`` uses ``I_1`` and ``kappa_1``.
    """
    if regime == "large":
        I, kappa = bundle["I_2"], bundle["kappa_0"]
    elif regime == "small":
        I, kappa = bundle["I_1"], bundle["kappa_1"]
    else:
        raise DomainError(f"unknown regime {regime!r}")
    return (2 * bundle["C_thm6"] / (eps * I)) ** (1 / (params.beta * kappa))


def functional_fode_bracket(params: ProblemParams, data: InitialData, R: float, *,
                            C_Nq: float | None = None, threshold: float = 1e8) -> FunctionalBracket:
    r"""Blow-up bracket of :math:`{}^cD^\alpha g = D R^{-N(p-1)} g^p` with
    :math:`g(0) = M_R(0) - C R^{N-\beta/(p-1)}`.

    This is the comparison problem the functional method reduces to; its
    blow-up time bounds the lifespan of the field from above.
    """
    bundle = thm6_constants(params, C_Nq)
    fn = SpaceTestFn(params.N, params.q, R)
    M0 = M_R_zero(data.func, params.gamma, params.alpha, fn, radial=data.radial, breakpoints=data.breakpoints)
    level = barrier_level(params, R, bundle)
    if not M0 > level:
        raise HypothesisError(f"M_R(0) > barrier fails at R={R}: {M0:.6g} <= {level:.6g}")
    B = bundle["D_thm6"] * R ** (-params.N * (params.p - 1))
    est = detect_blowup(FodeProblem(params.alpha, B, params.p, M0 - level), threshold)
    return FunctionalBracket(R, M0, level, B, est.t_last_finite, est.t_threshold)
