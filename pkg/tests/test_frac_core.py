from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from fracnls.errors import DomainError
from fracnls.frac_core import (GridFunction1D, caputo_derivative, check_order, fundamental_identity_residual,
                               gamma_fn, mittag_leffler, rl_integral)


def grid(func, n=1001, t1=1.0):
    return GridFunction1D.from_callable(func, 0.0, t1, n)


class TestGamma:
    @pytest.mark.parametrize("x, expected", [(1.0, 1.0), (0.5, math.sqrt(math.pi)),
                                             (2.5, 1.5 * 0.5 * math.sqrt(math.pi))])
    def test_values(self, x, expected):
        assert gamma_fn(x) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.5])
    def test_rejects_nonpositive(self, x):
        with pytest.raises(DomainError):
            gamma_fn(x)


class TestGridFunction:
    def test_samples_are_read_only_copy(self):
        data = np.linspace(0, 1, 5)
        f = GridFunction1D(0.0, 1.0, data)
        data[0] = 9.0
        assert f.samples[0] == 0.0
        with pytest.raises(ValueError):
            f.samples[0] = 1.0

    @pytest.mark.parametrize("t0, t1, n", [(0.0, 1.0, 1), (1.0, 1.0, 5), (2.0, 1.0, 5)])
    def test_rejects_bad_grid(self, t0, t1, n):
        with pytest.raises(DomainError):
            GridFunction1D(t0, t1, np.zeros(n))

    @pytest.mark.parametrize("value", [0.0, 1.2, -0.5])
    def test_order_range(self, value):
        with pytest.raises(DomainError):
            check_order(value)


class TestMittagLeffler:
    def test_exponential(self):
        assert mittag_leffler(1.0, 1.0) == pytest.approx(math.e, rel=1e-13)

    def test_origin(self):
        assert mittag_leffler(0.5, 0.0) == 1.0

    @pytest.mark.parametrize("z", [1.0, -2.0, 0.5 + 1.5j, -3.0 - 1.0j])
    def test_half_order_erfc_identity(self, z):
        exact = np.exp(z * z) * special.erfc(-z)
        assert abs(mittag_leffler(0.5, z) - exact) <= 1e-11 * max(1.0, abs(exact))

    def test_known_value(self):
        assert mittag_leffler(0.5, 1.0).real == pytest.approx(5.00898008076228, rel=1e-12)

    def test_radius_limit(self):
        with pytest.raises(DomainError):
            mittag_leffler(0.5, 100.0)

    @given(st.floats(0.2, 1.0), st.floats(-5.0, 5.0))
    @settings(max_examples=30, deadline=None)
    def test_real_argument_stays_real(self, alpha, x):
        assert abs(mittag_leffler(alpha, x).imag) < 1e-12


class TestRiemannLiouville:
    def test_first_order_is_integral(self):
        f = rl_integral(grid(lambda t: np.ones_like(t)), 1.0)
        assert f.samples[-1] == pytest.approx(1.0, abs=1e-12)

    def test_constant(self):
        f = rl_integral(grid(lambda t: np.ones_like(t)), 0.5)
        assert f.samples[-1] == pytest.approx(1 / gamma_fn(1.5), rel=1e-10)

    def test_linear(self):
        f = rl_integral(grid(lambda t: t), 0.5)
        assert f.samples[-1] == pytest.approx(gamma_fn(2) / gamma_fn(2.5), rel=1e-8)

    def test_right_side_by_reflection(self):
        f = rl_integral(grid(lambda t: 1 - t), 0.5, "right")
        assert f.samples[0] == pytest.approx(gamma_fn(2) / gamma_fn(2.5), rel=1e-8)

    def test_starting_weights_make_singular_power_exact(self):
        nu = 0.5
        f = grid(lambda t: t ** nu, n=101)
        plain = rl_integral(f, 0.5).samples[-1]
        corrected = rl_integral(f, 0.5, starting_exponents=(nu,)).samples[-1]
        exact = gamma_fn(nu + 1) / gamma_fn(nu + 1.5)
        assert abs(corrected - exact) < abs(plain - exact)
        assert corrected == pytest.approx(exact, rel=1e-10)

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 1.0))
    @settings(max_examples=25, deadline=None)
    def test_linearity(self, a, b, sigma):
        f, g = grid(np.sin, 101), grid(np.exp, 101)
        lhs = rl_integral(f.with_samples(a * f.samples + b * g.samples), sigma).samples
        rhs = a * rl_integral(f, sigma).samples + b * rl_integral(g, sigma).samples
        assert np.allclose(lhs, rhs, atol=1e-12 * (1 + abs(a) + abs(b)) * 10)


class TestCaputo:
    def test_constant_has_zero_derivative(self):
        d = caputo_derivative(grid(lambda t: 3 + 0 * t), 0.5)
        assert np.max(np.abs(d.samples)) == 0.0

    @pytest.mark.parametrize("scheme", ["l1", "l1-2"])
    def test_linear(self, scheme):
        d = caputo_derivative(grid(lambda t: t), 0.5, scheme=scheme)
        assert d.samples[-1] == pytest.approx(1 / gamma_fn(1.5), rel=1e-10)

    def test_right_derivative_of_time_factor(self):
        d = caputo_derivative(grid(lambda t: (1 - t) ** 2, n=2001), 0.5, "right", scheme="l1-2")
        assert d.samples[0] == pytest.approx(gamma_fn(3) / gamma_fn(2.5), rel=1e-5)

    def test_first_order_limit(self):
        d = caputo_derivative(grid(lambda t: t ** 2), 1.0)
        assert np.allclose(d.samples, 2 * d.times, atol=1e-10)

    def test_l12_beats_l1(self):
        f = grid(lambda t: t ** 3, n=201)
        exact = gamma_fn(4) / gamma_fn(3.5) * f.times ** 2.5
        err1 = np.max(np.abs(caputo_derivative(f, 0.5).samples - exact))
        err2 = np.max(np.abs(caputo_derivative(f, 0.5, scheme="l1-2").samples - exact))
        assert err2 < err1 / 5

    def test_unknown_scheme(self):
        with pytest.raises(DomainError):
            caputo_derivative(grid(np.sin), 0.5, scheme="euler")


class TestIdentityResidual:
    def test_constant(self):
        assert fundamental_identity_residual(grid(lambda t: 1 + 0 * t), 0.5) == 0.0

    def test_linear(self):
        assert fundamental_identity_residual(grid(lambda t: t, n=1001), 0.5) <= 1e-4

    def test_square(self):
        assert fundamental_identity_residual(grid(lambda t: t * t, n=2001), 0.3) <= 1e-4
