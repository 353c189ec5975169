"""Scalar special functions against closed forms and high-precision oracles."""

import math

import mpmath as mp
import numpy as np
import pytest

from polykernel import specfun as sf
from polykernel.errors import (
    ConvergenceError,
    DomainError,
    NonTerminatingError,
    ParameterPoleError,
    PoleError,
    SlowConvergenceError,
)

mp.mp.dps = 50


def mp_qhat(nu, mu, z):
    """Oracle: e^{-i pi mu} Q_nu^mu(z) via mpmath's type-3 Legendre Q."""
    val = mp.expjpi(-mu) * mp.legenq(mp.mpf(nu), mp.mpf(mu), mp.mpf(z), type=3)
    assert abs(mp.im(val)) < mp.mpf("1e-35") * max(1, abs(val))
    return float(mp.re(val))


class TestGamma:
    def test_half_integer(self):
        assert sf.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)

    def test_factorial(self):
        assert sf.gamma(5.0) == 24.0

    def test_reflection_side(self):
        # Gamma(-1/2) = -2 sqrt(pi) by the recurrence
        assert sf.gamma(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-15)

    def test_poles(self):
        for x in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                sf.gamma(x)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            sf.gamma(200.0)

    def test_recurrence_property(self):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 1000:
            x = float(rng.uniform(-5.0, 5.0))
            if abs(x - round(x)) < 1e-3 and round(x) <= 0:
                continue
            if abs(x + 1 - round(x + 1)) < 1e-3 and round(x + 1) <= 0:
                continue
            lhs = sf.gamma(x + 1.0)
            rhs = x * sf.gamma(x)
            assert abs(lhs - rhs) <= 1e-12 * abs(lhs)
            checked += 1

    def test_signed_log(self):
        for x in (0.25, 3.7, -0.5, -1.5, -2.25):
            sign, lg = sf.gamma_signed_log(x)
            assert sign * math.exp(lg) == pytest.approx(math.gamma(x), rel=1e-13)


class TestPochhammer:
    def test_basic(self):
        assert sf.pochhammer(3.0, 2) == 12.0
        assert sf.pochhammer(1.234, 0) == 1.0

    def test_negative_base(self):
        # (-n-k)_k = (-1)^k (n+k)!/n! at n = 5, k = 2
        assert sf.pochhammer(-7.0, 2) == 42.0
        assert sf.pochhammer(-7.0, 2) == (-1) ** 2 * math.factorial(7) / math.factorial(5)

    def test_gamma_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            z = float(rng.uniform(0.05, 8.0))
            n = int(rng.integers(0, 21))
            lhs = sf.pochhammer(z, n) * sf.gamma(z)
            rhs = sf.gamma(z + n)
            assert abs(lhs - rhs) <= 1e-12 * abs(rhs)

    def test_splitting_identity(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            z = float(rng.uniform(-4.0, 4.0))
            n = int(rng.integers(0, 10))
            k = int(rng.integers(0, 10))
            lhs = sf.pochhammer(z, n + k)
            rhs = sf.pochhammer(z, k) * sf.pochhammer(z + k, n)
            assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(lhs))


class TestGauss2F1:
    def test_binomial_case(self):
        # (a, b; b; x) = (1-x)^{-a}
        assert sf.gauss_2f1(2.5, 1.7, 1.7, 0.3) == pytest.approx(
            2.4392420598661095, rel=1e-14)

    def test_zero_argument(self):
        assert sf.gauss_2f1(1.3, -0.4, 2.2, 0.0) == 1.0

    def test_terminating(self):
        # hand-summed three-term series
        assert sf.gauss_2f1(-2.0, 3.0, 1.5, 0.4) == pytest.approx(-0.088, rel=1e-14)

    def test_terminating_outside_disc(self):
        assert sf.gauss_2f1(-3.0, 2.0, 4.0, 2.5) == pytest.approx(
            float(mp.hyp2f1(-3, 2, 4, 2.5)), rel=1e-13)

    def test_parameter_pole(self):
        with pytest.raises(ParameterPoleError):
            sf.gauss_2f1(0.5, 0.5, -1.0, 0.3)

    def test_divergent(self):
        with pytest.raises(ConvergenceError):
            sf.gauss_2f1(0.5, 0.5, 1.5, 1.0)

    def test_random_against_mpmath(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            a = float(rng.uniform(-3.0, 3.0))
            b = float(rng.uniform(-3.0, 3.0))
            c = float(rng.uniform(0.3, 4.0))
            x = float(rng.uniform(-0.9, 0.9))
            want = float(mp.hyp2f1(a, b, c, x))
            got = sf.gauss_2f1(a, b, c, x)
            assert abs(got - want) <= 1e-13 * max(1.0, abs(want))


class TestHyp3F2Unit:
    def test_single_term(self):
        assert sf.hyp_3f2_unit(0.0, 1.2, 3.4, 2.1, 0.7) == 1.0

    def test_two_term_closed_form(self):
        a2, a3, b1, b2 = 1.3, 2.6, 0.9, 1.8
        assert sf.hyp_3f2_unit(-1.0, a2, a3, b1, b2) == pytest.approx(
            1.0 - a2 * a3 / (b1 * b2), rel=1e-14)

    def test_reference_summation(self):
        # 50-digit reference: 3F2(-3, 5, 1.5; 2.5, 4; 1) = 2/21
        assert sf.hyp_3f2_unit(-3.0, 5.0, 1.5, 2.5, 4.0) == pytest.approx(
            0.09523809523809523810, rel=1e-13)

    def test_non_terminating(self):
        with pytest.raises(NonTerminatingError):
            sf.hyp_3f2_unit(0.5, 1.0, 2.0, 3.0, 4.0)


class TestLegendreQHat:
    def test_q0_log_form(self):
        # oracle: Q_0(z) = 0.5 log((z+1)/(z-1)), cross-checked by quadrature
        got = sf.legendre_q_hat(0.0, 0.0, 2.0)
        assert got.value == pytest.approx(0.5493061443340548457, rel=1e-13)
        quad = float(mp.quad(lambda t: 1.0 / (2.0 - t), [-1, 1]) / 2)
        assert got.value == pytest.approx(quad, rel=1e-12)

    def test_q1_closed_form(self):
        # Q_1(z) = z/2 log((z+1)/(z-1)) - 1
        want = 1.5 * math.log(2.0) - 1.0
        assert sf.legendre_q_hat(1.0, 0.0, 3.0).value == pytest.approx(want, rel=1e-13)

    def test_whipple_point(self):
        nu, mu, z = 1.3, 0.4, 1.7
        qhat = sf.legendre_q_hat(nu, mu, z).value
        lhs = sf.legendre_p_gt1(-mu - 0.5, -nu - 0.5, z / math.sqrt(z * z - 1.0))
        rhs = math.sqrt(2.0 / math.pi) * (z * z - 1.0) ** 0.25 / sf.gamma(nu + mu + 1.0) * qhat
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))

    def test_whipple_grid(self):
        rng = np.random.default_rng(19)
        count = 0
        while count < 100:
            nu = float(rng.uniform(-1.0, 3.0))
            mu = float(rng.uniform(-1.0, 3.0))
            z = float(rng.uniform(1.1, 10.0))
            if nu + mu <= -0.9:  # stay off the Gamma(nu+mu+1) pole line
                continue
            qhat = sf.legendre_q_hat(nu, mu, z).value
            lhs = sf.legendre_p_gt1(-mu - 0.5, -nu - 0.5, z / math.sqrt(z * z - 1.0))
            rhs = (math.sqrt(2.0 / math.pi) * (z * z - 1.0) ** 0.25
                   / sf.gamma(nu + mu + 1.0) * qhat)
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))
            count += 1

    def test_half_integer_order_closed_forms(self):
        # Qhat_nu^{1/2} and Qhat_nu^{-1/2} reduce to elementary functions
        for nu, z in ((0.5, 1.7), (3.0, 2.2), (2.5, 1.3)):
            u = z + math.sqrt(z * z - 1.0)
            base = math.sqrt(0.5 * math.pi) * (z * z - 1.0) ** -0.25 * u ** (-nu - 0.5)
            assert sf.legendre_q_hat(nu, 0.5, z).value == pytest.approx(base, rel=1e-12)
            assert sf.legendre_q_hat(nu, -0.5, z).value == pytest.approx(
                base / (nu + 0.5), rel=1e-12)

    def test_against_mpmath_grid(self):
        rng = np.random.default_rng(23)
        for _ in range(40):
            nu = float(rng.uniform(-0.9, 6.0))
            mu = float(rng.uniform(-2.0, 2.0))
            z = float(rng.uniform(1.05, 8.0))
            if sf._nonpositive_int(nu + mu + 1.0) is not None:
                continue
            got = sf.legendre_q_hat(nu, mu, z).value
            want = mp_qhat(nu, mu, z)
            assert abs(got - want) <= 1e-11 * max(1e-300, abs(want))

    def test_phase_exponent_records_order(self):
        out = sf.legendre_q_hat(1.0, 0.75, 2.0)
        assert float(out.phase_exponent) == -0.75

    def test_pole(self):
        with pytest.raises(PoleError):
            sf.legendre_q_hat(0.0, -2.0, 1.5)  # nu + mu = -2

    def test_slow_convergence_guard(self):
        with pytest.raises(SlowConvergenceError):
            sf.legendre_q_hat(1.0, 0.0, 1.0 + 1e-8)

    def test_degenerate_degree(self):
        # both hypergeometric representations collapse at nu = -3/2
        with pytest.raises(PoleError):
            sf.legendre_q_hat(-1.5, 0.25, 2.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.legendre_q_hat(1.0, 0.0, 0.5)


class TestLegendrePGt1:
    def test_degree_one(self):
        assert sf.legendre_p_gt1(1.0, 0.0, 2.5) == pytest.approx(2.5, rel=1e-14)

    def test_degree_zero(self):
        assert sf.legendre_p_gt1(0.0, 0.0, 7.3) == 1.0

    def test_reference_value(self):
        # 50-digit reference summation of the defining 2F1: P_3^2(1.5) = 225/8
        assert sf.legendre_p_gt1(3.0, 2.0, 1.5) == pytest.approx(28.125, rel=1e-13)

    def test_negative_integer_order(self):
        # P_nu^{-n} = Gamma(nu-n+1)/Gamma(nu+n+1) P_nu^n for integer degree
        for l, n, z in ((4, 2, 1.8), (5, 1, 2.5), (3, 3, 1.2)):
            lhs = sf.legendre_p_gt1(l, -n, z)
            rhs = (math.factorial(l - n) / math.factorial(l + n)
                   * sf.legendre_p_gt1(l, n, z))
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_negative_order_beyond_degree(self):
        # nonzero even when the positive-order value vanishes
        got = sf.legendre_p_gt1(2.0, -5.0, 1.5)
        want = float(mp.legenp(2, -5, mp.mpf("1.5"), type=3))
        assert got == pytest.approx(want, rel=1e-12)

    def test_noninteger_against_mpmath(self):
        rng = np.random.default_rng(29)
        for _ in range(30):
            nu = float(rng.uniform(-1.5, 3.0))
            mu = float(rng.uniform(-2.5, 0.8))
            z = float(rng.uniform(1.05, 2.8))
            if sf._nonpositive_int(1.0 - mu) is not None:
                continue
            got = sf.legendre_p_gt1(nu, mu, z)
            want = float(mp.legenp(mp.mpf(nu), mp.mpf(mu), mp.mpf(z), type=3))
            assert abs(got - want) <= 1e-11 * max(1.0, abs(want))

    def test_parameter_pole(self):
        with pytest.raises(ParameterPoleError):
            sf.legendre_p_gt1(0.7, 2.0, 1.5)  # 1 - mu = -1 without termination


class TestFerrersP:
    def test_linear(self):
        assert sf.ferrers_p(1, 0, 0.3) == pytest.approx(0.3, rel=1e-15)

    def test_constant(self):
        assert sf.ferrers_p(0, 0, -0.77) == 1.0

    def test_reference_value(self):
        # direct evaluation of the defining Gauss series (regularized limit)
        assert sf.ferrers_p(2, 1, 0.5) == pytest.approx(-1.2990381056766580, rel=1e-13)

    def test_against_mpmath_grid(self):
        rng = np.random.default_rng(31)
        for _ in range(60):
            l = int(rng.integers(0, 12))
            m = int(rng.integers(-l, l + 1)) if l else 0
            x = float(rng.uniform(-0.99, 0.99))
            got = sf.ferrers_p(l, m, x)
            want = float(mp.legenp(l, m, mp.mpf(x)))
            assert abs(got - want) <= 1e-12 * max(1.0, abs(want))

    def test_domain_error(self):
        with pytest.raises(DomainError):
            sf.ferrers_p(2, 1, 1.0)

    def test_endpoint_order_zero(self):
        assert sf.ferrers_p(3, 0, 1.0) == 1.0
        assert sf.ferrers_p(3, 0, -1.0) == -1.0

    def test_array_input(self):
        xs = np.linspace(-0.9, 0.9, 7)
        got = sf.ferrers_p(4, 2, xs)
        want = [sf.ferrers_p(4, 2, float(x)) for x in xs]
        np.testing.assert_allclose(got, want, rtol=1e-14)


class TestJacobiQ2:
    def test_legendre_reduction(self):
        # Q_0^{(0,0)}(5) = Q_0(5) = 0.5 log(6/4)
        assert sf.jacobi_q2(0.0, 0.0, 0.0, 5.0) == pytest.approx(
            0.20273255405408219, rel=1e-13)

    def test_symmetric_bridge_point(self):
        # Q_{n+nu-1}^{(mu-nu+1/2, mu-nu+1/2)}(z) against the Legendre form
        n, nu, mu, z = 2, 1.5, 0.5, 4.0
        lhs = sf.jacobi_q2(n + nu - 1.0, mu - nu + 0.5, mu - nu + 0.5, z)
        rhs = (2.0 ** (mu - nu + 0.5) * sf.gamma(mu + n + 0.5)
               / (sf.gamma(nu + n) * (z * z - 1.0) ** (0.5 * (mu - nu) + 0.25))
               * sf.legendre_q_hat(n + mu - 0.5, nu - mu - 0.5, z).value)
        assert abs(lhs - rhs) < 1e-10 * abs(lhs)

    def test_symmetric_bridge_grid(self):
        rng = np.random.default_rng(37)
        count = 0
        while count < 50:
            n = int(rng.integers(0, 5))
            nu = float(rng.uniform(0.2, 3.0))
            mu = float(rng.uniform(-0.4, 2.0))
            z = float(rng.uniform(1.2, 6.0))
            lhs = sf.jacobi_q2(n + nu - 1.0, mu - nu + 0.5, mu - nu + 0.5, z)
            rhs = (2.0 ** (mu - nu + 0.5) * sf.gamma(mu + n + 0.5)
                   / (sf.gamma(nu + n) * (z * z - 1.0) ** (0.5 * (mu - nu) + 0.25))
                   * sf.legendre_q_hat(n + mu - 0.5, nu - mu - 0.5, z).value)
            assert abs(lhs - rhs) <= 1e-9 * max(1e-30, abs(lhs))
            count += 1

    def test_printed_series_agreement_far_field(self):
        # the 2/(1-z) representation is valid for z > 3; compare against it
        for (g, a, b, z) in ((1.5, 0.3, -0.4, 5.0), (2.5, 1.0, 0.5, 4.0),
                             (3.7, -0.2, 0.9, 8.0)):
            direct = (2.0 ** (a + b + g) * math.gamma(a + g + 1.0)
                      * math.gamma(b + g + 1.0)
                      / (math.gamma(a + b + 2.0 * g + 2.0)
                         * (z - 1.0) ** (a + g + 1.0) * (z + 1.0) ** b)
                      * sf.gauss_2f1(g + 1.0, a + g + 1.0, a + b + 2.0 * g + 2.0,
                                     2.0 / (1.0 - z)))
            assert sf.jacobi_q2(g, a, b, z) == pytest.approx(direct, rel=1e-12)

    def test_decay(self):
        assert abs(sf.jacobi_q2(1.0, 0.0, 0.0, 1e3)) < abs(sf.jacobi_q2(1.0, 0.0, 0.0, 10.0))

    def test_pole(self):
        with pytest.raises(PoleError):
            sf.jacobi_q2(1.0, -3.0, 0.0, 2.0)  # alpha + gamma = -2
