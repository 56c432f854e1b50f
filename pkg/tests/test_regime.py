from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from fracnls.constants import ProblemParams, i_power, thm6_constants
from fracnls.constants import testfn_method_constants as method_constants
from fracnls.errors import DomainError
from fracnls.regime import (DataProfile, InitialData, check_conditions, classify, corollary_radius, exponent_band,
                            functional_fode_bracket, lifespan_bound, lifespan_theorem2, signed_data_integral)


def gaussian(amplitude=1.0, width=1.0):
    return InitialData(lambda x: amplitude * math.exp(-(x / width) ** 2))


class TestBands:
    @given(st.integers(1, 4), st.floats(0.1, 1.9), st.floats(1.01, 8.0))
    @settings(max_examples=100)
    def test_exactly_one_band(self, N, beta, p):
        band = exponent_band(ProblemParams(0.5, beta, N, p))
        assert band in ("p<p_F", "p=p_F", "p_F<p<=p_s", "p>p_s")
        pF = 1 + beta / N
        assert (band == "p<p_F") == (p < pF and not math.isclose(p, pF, rel_tol=1e-12))


class TestConditions:
    def test_gaussian_data_integral(self):
        params = ProblemParams(0.5, 1.0, 1, 1.5)
        value = signed_data_integral(params, gaussian(), "lambda1_G1")
        assert value == pytest.approx(math.cos(math.pi / 4) * math.sqrt(math.pi), rel=1e-10)
        conds = check_conditions(params, DataProfile("integrable_L1"), gaussian())
        assert any(c.name == "signed data integral > 0" and c.holds for c in conds)

    def test_gamma_pairing(self):
        params = ProblemParams(0.5, 1.0, 1, 1.5, lam=1j, gamma=-1j)
        conds = check_conditions(params, DataProfile("integrable_L1", sign_case="gamma_pairing", margin=1.0))
        assert any(c.name == "Re(gamma lambda) > 0" and c.holds and c.margin == pytest.approx(1.0) for c in conds)

    def test_outer_interval(self):
        params = ProblemParams(0.5, 1.0, 1, 2.0)
        conds = check_conditions(params, DataProfile("outer_singular", k=0.75, margin=0.0), C_Nq=1.0)
        assert any(c.name == "N/2 < k < beta/(p-1)" and c.holds for c in conds)

    def test_profile_validation(self):
        with pytest.raises(DomainError):
            DataProfile("outer_singular")
        with pytest.raises(DomainError):
            DataProfile("smooth")


class TestClassify:
    def test_subcritical(self):
        verdict = classify(ProblemParams(0.5, 1.0, 1, 1.5), DataProfile("integrable_L1"), gaussian())
        assert verdict.theorem == "T1_subcritical"
        assert verdict.bound.kind == "global_nonexistence"

    def test_empty_range_is_vacuous(self):
        verdict = classify(ProblemParams(0.5, 1.0, 1, 2.5), DataProfile("inner_singular", k=0.8, margin=0.0),
                           C_Nq=1.0)
        t4 = next(c for c in verdict.candidates if c.theorem == "T4_supercritical_L2")
        assert t4.status == "vacuous-hypothesis"

    def test_supercritical_local(self):
        verdict = classify(ProblemParams(0.5, 1.0, 3, 2.5), DataProfile("inner_singular", k=0.7, margin=0.0),
                           C_Nq=1.0)
        assert verdict.theorem == "T4_supercritical_L2"
        assert verdict.bound.kind == "local_nonexistence"
        assert "T5_supercritical_L1" in verdict.applicable

    def test_small_data_lifespan(self):
        params = ProblemParams(0.5, 1.0, 1, 1.8, epsilon=0.01)
        profile = DataProfile("outer_singular", k=0.7, margin=0.0)
        verdict = classify(params, profile, C_Nq=1.0)
        bundle = method_constants(params.with_(k=0.7), C_Nq=1.0)
        assert verdict.theorem == "T2_small_data"
        assert verdict.bound.value == pytest.approx(bundle["B_0"] * 0.01 ** (-1 / (0.5 * bundle["kappa_0"])))

    def test_contradictory_profile(self):
        verdict = classify(ProblemParams(0.5, 1.0, 1, 1.8), DataProfile("outer_singular", k=1.5, margin=0.0),
                           C_Nq=1.0)
        assert verdict.theorem == "none"
        assert any(c.holds is False for c in verdict.conditions)

    def test_functional_method(self):
        params = ProblemParams(0.5, 1.0, 1, 2.0, gamma=i_power(0.5).conjugate())
        verdict = classify(params, DataProfile("integrable_L1", sign_case="gamma_pairing"),
                           gaussian(2.5, 8.0), C_Nq=1.0)
        assert verdict.theorem == "T6_functional"
        assert verdict.bound.kind == "lifespan_upper" and verdict.bound.value > 0


class TestLifespan:
    params = ProblemParams(0.5, 1.0, 1, 1.8)
    profile = DataProfile("outer_singular", k=0.7, margin=0.0)

    def bundle(self):
        return method_constants(self.params.with_(k=0.7), C_Nq=1.0)

    def test_branches_agree(self):
        b = self.bundle()
        assert b["B_0"] * b["eps_0"] ** (-1 / (0.5 * b["kappa_0"])) == pytest.approx(1.0, abs=1e-10)
        assert lifespan_theorem2(b, 0.5, b["eps_0"]) == 1.0
        assert lifespan_theorem2(b, 0.5, 2 * b["eps_0"]) == 1.0

    def test_doubling(self):
        b = self.bundle()
        eps = b["eps_0"] / 100
        ratio = lifespan_bound(self.params, self.profile, 2 * eps, C_Nq=1.0) / lifespan_bound(
            self.params, self.profile, eps, C_Nq=1.0)
        assert ratio == pytest.approx(2 ** (-1 / (0.5 * b["kappa_0"])), rel=1e-12)

    def test_no_lifespan_for_global_results(self):
        with pytest.raises(DomainError):
            lifespan_bound(ProblemParams(0.5, 1.0, 1, 1.5), DataProfile("integrable_L1"), 1.0)


class TestFunctionalBracket:
    def test_large_data_bracket_below_bound(self):
        params = ProblemParams(0.5, 1.0, 1, 2.0, gamma=i_power(0.5).conjugate(), k=0.4)
        bundle = thm6_constants(params)
        eps = 2 * bundle["eps_3"]
        R = corollary_radius(params, eps, bundle, regime="large")
        data = InitialData(lambda x: eps * abs(x) ** -0.4 if 0 < abs(x) <= 1 else 0.0, breakpoints=(1.0,))
        bracket = functional_fode_bracket(params, data, R)
        assert bracket.M_R0 >= 2 * bracket.level
        assert bracket.t_threshold <= bundle["B_2"] * eps ** (-1 / (0.5 * bundle["kappa_0"]))
