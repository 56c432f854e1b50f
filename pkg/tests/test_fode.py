from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracnls.errors import DomainError, HypothesisError, NoBlowupError
from fracnls.fode import (FodeProblem, barrier_check, check_sandwich, detect_blowup, forcing_profile, solve_fode,
                          solve_linear_fode_oracle, solve_volterra)
from fracnls.frac_core import gamma_fn


def power_series_square(alpha, B, g0, t, terms=200):
    """Series ``sum a_n t^(n alpha)`` solving ``D^alpha g = B g^2`` (valid well inside the blow-up time)."""
    a = [g0]
    for n in range(terms):
        conv = sum(a[j] * a[n - j] for j in range(n + 1))
        a.append(B * gamma_fn(n * alpha + 1) / gamma_fn((n + 1) * alpha + 1) * conv)
    return sum(c * t ** (n * alpha) for n, c in enumerate(a))


class TestSolver:
    def test_classical_limit(self):
        sol = solve_fode(FodeProblem(1.0, 1.0, 2.0, 1.0), 0.5, 1e-4)
        assert sol.values[-1] == pytest.approx(2.0, abs=1e-3)
        assert sol.values[0] == 1.0

    def test_fractional_against_power_series(self):
        oracle = power_series_square(0.5, 1.0, 1.0, 0.02)
        sol = solve_fode(FodeProblem(0.5, 1.0, 2.0, 1.0), 0.02, 1e-5)
        assert sol.values[-1] == pytest.approx(oracle, rel=1e-6)
        assert oracle == pytest.approx(1.2155629, abs=1e-6)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    @pytest.mark.parametrize("lam", [-1.0, 1.0])
    def test_linear_oracle(self, alpha, lam):
        t, y, _ = solve_volterra(lambda s, v: lam * v, 1.0, alpha, 1.0, 1e-3)
        exact = solve_linear_fode_oracle(alpha, lam, 1.0, 1.0).real
        assert abs(y[-1] - exact) / abs(exact) <= 1e-4

    def test_complex_linear(self):
        lam = 0.3 - 1.2j
        _, y, _ = solve_volterra(lambda s, v: lam * v, 1.0 + 0j, 0.6, 1.0, 1e-3)
        exact = solve_linear_fode_oracle(0.6, lam, 1.0, 1.0)
        assert abs(y[-1] - exact) / abs(exact) <= 1e-4

    def test_oracle_examples(self):
        assert solve_linear_fode_oracle(1.0, 1.0, 1.0, 1.0).real == pytest.approx(math.e)
        assert solve_linear_fode_oracle(0.5, 1.0, 1.0, 1.0).real == pytest.approx(5.00898, abs=1e-5)
        assert solve_linear_fode_oracle(0.5, 0.0, 2.0, 3.0) == 2.0

    def test_overflow_truncates(self):
        sol = solve_fode(FodeProblem(0.5, 1.0, 2.0, 1.0), 2.0, 1e-3)
        assert sol.blew_up and sol.times[-1] < 2.0

    @pytest.mark.parametrize("kwargs", [dict(B=0.0), dict(p=1.0), dict(g0=-1.0), dict(A=-1.0)])
    def test_problem_validation(self, kwargs):
        base = dict(alpha=0.5, B=1.0, p=2.0, g0=1.0)
        base.update(kwargs)
        with pytest.raises(DomainError):
            FodeProblem(**base)

    def test_step_must_divide_horizon(self):
        with pytest.raises(DomainError):
            solve_fode(FodeProblem(0.5, 1.0, 2.0, 1.0), 0.1, 0.03)


class TestBlowup:
    def test_classical_time(self):
        est = detect_blowup(FodeProblem(1.0, 1.0, 2.0, 1.0))
        assert est.t_last_finite <= 1.0 + 1e-2 and est.t_threshold >= 1.0 - 1e-2
        assert est.t_threshold - est.t_last_finite <= 1e-2

    def test_fractional_bracket_inside_bounds(self):
        est = detect_blowup(FodeProblem(0.5, 1.0, 2.0, 1.0))
        assert math.pi / 64 <= est.t_last_finite and est.t_threshold <= math.pi / 4

    def test_classical_scaling(self):
        one = detect_blowup(FodeProblem(1.0, 1.0, 2.0, 1.0)).t_threshold
        two = detect_blowup(FodeProblem(1.0, 1.0, 2.0, 2.0)).t_threshold
        assert two == pytest.approx(one / 2, rel=1e-2)

    def test_threshold_floor(self):
        with pytest.raises(DomainError):
            detect_blowup(FodeProblem(0.5, 1.0, 2.0, 1.0), threshold=10.0)

    def test_no_blowup_reported(self):
        with pytest.raises(NoBlowupError):
            detect_blowup(FodeProblem(0.5, 1.0, 2.0, 1.0), max_refinements=0, horizon_factor=1e-3)

    @pytest.mark.parametrize("alpha, p, B, g0", [(0.5, 2.0, 1.0, 1.0), (0.8, 3.0, 2.0, 1.0), (1.0, 2.0, 1.0, 1.0)])
    def test_sandwich(self, alpha, p, B, g0):
        assert check_sandwich(FodeProblem(alpha, B, p, g0)).passed

    @given(st.sampled_from([0.3, 0.6, 0.9]), st.floats(1.3, 3.5), st.floats(0.2, 5.0), st.floats(0.2, 5.0))
    @settings(max_examples=15, deadline=None)
    def test_sandwich_property(self, alpha, p, B, g0):
        assert check_sandwich(FodeProblem(alpha, B, p, g0)).passed


class TestBarrier:
    def test_zero_level_monotone(self):
        _, y, _ = solve_volterra(FodeProblem(0.5, 1.0, 2.0, 0.3).rhs, 0.3, 0.5, 0.5, 1e-3)
        assert np.all(y >= 0) and np.all(np.diff(y) >= 0)

    def test_stays_above_level(self):
        report = barrier_check(FodeProblem(0.5, 1.0, 2.0, 1.5, A=1.0), 0.5, 0.2)
        assert report.passed and report.minimum >= 1.0

    def test_rejects_equality(self):
        with pytest.raises(HypothesisError):
            barrier_check(FodeProblem(0.5, 1.0, 2.0, 1.0, A=1.0), 0.5, 0.2)

    def test_forcing_profile_range_and_determinism(self):
        t = np.linspace(0, 10, 1001)
        f = forcing_profile(t, seed=3)
        assert np.all((0 <= f) & (f <= 1))
        assert np.array_equal(f, forcing_profile(t, seed=3))
