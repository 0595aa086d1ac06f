"""Trigonometric-hyperbolic phase functions: factorization, symmetry,
derivative closed forms vs central finite differences."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oscsum.trh import TrhPoint, trh_derivatives, trh_eval, trh_nat_eval

FD_H = 1e-5


def wrap_angle(x):
    """Map an angle difference to (-pi, pi] so finite differences of an
    angle-valued function ignore branch jumps."""
    return (x + math.pi) % (2.0 * math.pi) - math.pi


class TestTrhEval:
    def test_reduces_to_cosh_on_axis(self):
        val, rho, theta = trh_eval(1.3, 0.0, 0.0)
        assert val == pytest.approx(math.cosh(1.3), rel=1e-15)
        assert theta == pytest.approx(0.0, abs=1e-15)

    def test_reduces_to_minus_sinh(self):
        val, _, _ = trh_eval(0.7, math.pi / 2, math.pi / 2)
        assert val == pytest.approx(-math.sinh(0.7), rel=1e-15)

    def test_factorization_postcondition(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            r = rng.uniform(-2, 2)
            omega = rng.uniform(0, math.pi)
            phi = rng.uniform(0, 2 * math.pi)
            if math.sinh(r) ** 2 + math.cos(omega) ** 2 < 1e-6:
                continue
            val, rho, theta = trh_eval(r, omega, phi)
            assert val == pytest.approx(rho * math.cos(phi + theta), abs=1e-12)

    def test_singular_point_raises(self):
        with pytest.raises(ValueError):
            trh_eval(0.0, math.pi / 2, 0.3)
        with pytest.raises(ValueError):
            TrhPoint(0.0, math.pi / 2, 0.3)

    @settings(max_examples=100, deadline=None)
    @given(
        r=st.floats(min_value=-2, max_value=2),
        omega=st.floats(min_value=0, max_value=math.pi - 1e-9),
        phi=st.floats(min_value=0, max_value=2 * math.pi),
    )
    def test_four_symmetries(self, r, omega, phi):
        if math.sinh(r) ** 2 + math.cos(omega) ** 2 < 1e-6:
            return
        base = trh_eval(r, omega, phi).trh
        # phi -> phi + pi and omega -> omega + pi both flip the sign;
        # (r, phi) -> (-r, -phi) and (omega, phi) -> (pi-omega, pi-phi)
        # leave the value unchanged
        assert trh_eval(r, omega, phi + math.pi).trh == pytest.approx(-base, abs=1e-10)
        assert trh_eval(r, omega + math.pi, phi).trh == pytest.approx(-base, abs=1e-10)
        assert trh_eval(-r, omega, -phi).trh == pytest.approx(base, abs=1e-10)
        assert trh_eval(r, math.pi - omega, math.pi - phi).trh == pytest.approx(base, abs=1e-10)

    @settings(max_examples=100, deadline=None)
    @given(
        r=st.floats(min_value=-2, max_value=2),
        omega=st.floats(min_value=0, max_value=math.pi - 1e-9),
    )
    def test_rho_squared_three_expressions(self, r, omega):
        if math.sinh(r) ** 2 + math.cos(omega) ** 2 < 1e-6:
            return
        rho = trh_eval(r, omega, 0.0).rho
        e1 = math.sinh(r) ** 2 + math.cos(omega) ** 2
        e2 = math.cosh(r) ** 2 - math.sin(omega) ** 2
        e3 = (math.cosh(2 * r) + math.cos(2 * omega)) / 2
        assert rho * rho == pytest.approx(e1, rel=1e-12)
        assert e1 == pytest.approx(e2, rel=1e-12, abs=1e-12)
        assert e1 == pytest.approx(e3, rel=1e-12, abs=1e-12)


class TestTrhNat:
    def test_r_zero_gives_tan_squared(self):
        for omega in (0.3, 0.7, 1.1):
            rho_nat, _, _ = trh_nat_eval(0.0, omega)
            assert rho_nat == pytest.approx(math.tan(omega) ** 2, rel=1e-12)

    def test_omega_zero_gives_zero_angle(self):
        for r in (0.2, 1.0, 3.0):
            _, theta_nat, _ = trh_nat_eval(r, 0.0)
            assert theta_nat == 0.0

    def test_modulus_below_one_iff_cos2omega_positive(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            r = rng.uniform(-2, 2)
            omega = rng.uniform(0, math.pi)
            if math.sinh(2 * r) ** 2 + math.sin(2 * omega) ** 2 < 1e-6:
                continue
            rho_nat, _, _ = trh_nat_eval(r, omega)
            assert (rho_nat < 1.0) == (math.cos(2 * omega) > 0.0)

    def test_half_angle_tangent_identity(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            r = rng.uniform(-2, 2)
            omega = rng.uniform(0.05, math.pi - 0.05)
            if abs(math.sinh(2 * r)) < 1e-3:
                continue
            _, theta_nat, _ = trh_nat_eval(r, omega)
            assert math.tan(theta_nat / 2) == pytest.approx(
                math.sin(2 * omega) / math.sinh(2 * r), rel=1e-9, abs=1e-9
            )

    def test_quotient_forms_agree(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            r = rng.uniform(-2, 2)
            omega = rng.uniform(0, math.pi)
            if math.sinh(2 * r) ** 2 + math.sin(2 * omega) ** 2 < 1e-3:
                continue
            rho_nat, _, _ = trh_nat_eval(r, omega)
            sh2, ch2 = math.sinh(r) ** 2, math.cosh(r) ** 2
            so2, co2 = math.sin(omega) ** 2, math.cos(omega) ** 2
            assert rho_nat == pytest.approx((sh2 + so2) / (ch2 - so2), rel=1e-12)
            assert rho_nat == pytest.approx((ch2 - co2) / (sh2 + co2), rel=1e-12)

    def test_branch_continuous_in_r(self):
        # walk r across 0 at fixed omega; theta_nat must move continuously
        omega = 0.9
        rs = np.linspace(-1.5, 1.5, 601)
        vals = [trh_nat_eval(float(r), omega).theta_nat for r in rs]
        steps = np.abs(np.diff(vals))
        assert steps.max() < 0.05

    def test_degenerate_point_raises(self):
        with pytest.raises(ValueError):
            trh_nat_eval(0.0, 0.0)
        with pytest.raises(ValueError):
            trh_nat_eval(0.0, math.pi / 2)


class TestDerivatives:
    def test_finite_difference_audit_1000_points(self):
        # central differences, h = 1e-5, absolute tolerance 1e-6, away from
        # the degenerate set (sinh^2 2r + sin^2 2omega >= 1e-3)
        rng = np.random.default_rng(42)
        count = 0
        while count < 1000:
            r = rng.uniform(-2.0, 2.0)
            omega = rng.uniform(0.0, math.pi)
            if math.sinh(2 * r) ** 2 + math.sin(2 * omega) ** 2 < 1e-3:
                continue
            if math.sinh(r) ** 2 + math.cos(omega) ** 2 < 1e-3:
                continue
            count += 1
            d = trh_derivatives(r, omega)
            h = FD_H

            def rho_at(rr, oo):
                return math.sqrt(math.sinh(rr) ** 2 + math.cos(oo) ** 2)

            def lognat_at(rr, oo):
                return math.log(trh_nat_eval(rr, oo).rho_nat)

            def thetanat_at(rr, oo):
                return trh_nat_eval(rr, oo).theta_nat

            assert (rho_at(r + h, omega) - rho_at(r - h, omega)) / (2 * h) == pytest.approx(
                d.drho_dr, abs=1e-6
            )
            assert (rho_at(r, omega + h) - rho_at(r, omega - h)) / (2 * h) == pytest.approx(
                d.drho_domega, abs=1e-6
            )
            th0 = trh_eval(r, omega, 0.0).theta
            thr = wrap_angle(trh_eval(r + h, omega, 0.0).theta - trh_eval(r - h, omega, 0.0).theta)
            tho = wrap_angle(trh_eval(r, omega + h, 0.0).theta - trh_eval(r, omega - h, 0.0).theta)
            assert thr / (2 * h) == pytest.approx(d.dtheta_dr, abs=1e-6), (r, omega, th0)
            assert tho / (2 * h) == pytest.approx(d.dtheta_domega, abs=1e-6)

            assert (lognat_at(r + h, omega) - lognat_at(r - h, omega)) / (2 * h) == pytest.approx(
                d.dlogrho_nat_dr, abs=1e-6 * max(1, abs(d.dlogrho_nat_dr))
            )
            assert (lognat_at(r, omega + h) - lognat_at(r, omega - h)) / (2 * h) == pytest.approx(
                d.dlogrho_nat_domega, abs=1e-6 * max(1, abs(d.dlogrho_nat_domega))
            )
            tnr = wrap_angle(thetanat_at(r + h, omega) - thetanat_at(r - h, omega))
            tno = wrap_angle(thetanat_at(r, omega + h) - thetanat_at(r, omega - h))
            assert tnr / (2 * h) == pytest.approx(d.dtheta_nat_dr, abs=1e-6 * max(1, abs(d.dtheta_nat_dr)))
            assert tno / (2 * h) == pytest.approx(
                d.dtheta_nat_domega, abs=1e-6 * max(1, abs(d.dtheta_nat_domega))
            )

    def test_second_derivatives_fd(self):
        rng = np.random.default_rng(43)
        count = 0
        while count < 200:
            r = rng.uniform(-1.5, 1.5)
            omega = rng.uniform(0.0, math.pi)
            if math.sinh(2 * r) ** 2 + math.sin(2 * omega) ** 2 < 0.05:
                continue
            count += 1
            d = trh_derivatives(r, omega)
            h = 1e-4

            def lr_at(rr, oo):
                return trh_derivatives(rr, oo).dlogrho_nat_dr

            def tr_at(rr, oo):
                return trh_derivatives(rr, oo).dtheta_nat_dr

            scale = max(1.0, abs(d.d2logrho_nat_dr2), abs(d.d2theta_nat_dr2))
            assert (lr_at(r + h, omega) - lr_at(r - h, omega)) / (2 * h) == pytest.approx(
                d.d2logrho_nat_dr2, abs=2e-5 * scale
            )
            assert (lr_at(r, omega + h) - lr_at(r, omega - h)) / (2 * h) == pytest.approx(
                d.d2logrho_nat_drdomega, abs=2e-5 * scale
            )
            assert (tr_at(r + h, omega) - tr_at(r - h, omega)) / (2 * h) == pytest.approx(
                d.d2theta_nat_dr2, abs=2e-5 * scale
            )
            assert (tr_at(r, omega + h) - tr_at(r, omega - h)) / (2 * h) == pytest.approx(
                d.d2theta_nat_drdomega, abs=2e-5 * scale
            )

    def test_cauchy_riemann_and_harmonic_identities(self):
        rng = np.random.default_rng(44)
        for _ in range(300):
            r = rng.uniform(-2, 2)
            omega = rng.uniform(0, math.pi)
            if math.sinh(2 * r) ** 2 + math.sin(2 * omega) ** 2 < 1e-3:
                continue
            if math.sinh(r) ** 2 + math.cos(omega) ** 2 < 1e-3:
                continue
            d = trh_derivatives(r, omega)
            assert d.dlogrho_nat_dr - d.dtheta_nat_domega == pytest.approx(0.0, abs=1e-10)
            assert d.dtheta_nat_dr + d.dlogrho_nat_domega == pytest.approx(0.0, abs=1e-10)
            assert d.d2logrho_nat_dr2 + d.d2logrho_nat_domega2 == pytest.approx(0.0, abs=1e-10)
            assert d.d2theta_nat_dr2 + d.d2theta_nat_domega2 == pytest.approx(0.0, abs=1e-10)

    def test_quarter_gradient_normalization(self):
        # (A1^2 + B1^2)(sinh^2 2r + sin^2 2omega) = 1 with
        # A1 = dlogrho_nat_dr / 4, B1 = -dtheta_nat_dr / 4
        rng = np.random.default_rng(45)
        for _ in range(300):
            r = rng.uniform(-2, 2)
            omega = rng.uniform(0, math.pi)
            den = math.sinh(2 * r) ** 2 + math.sin(2 * omega) ** 2
            if den < 1e-3 or math.sinh(r) ** 2 + math.cos(omega) ** 2 < 1e-3:
                continue
            d = trh_derivatives(r, omega)
            a1 = d.dlogrho_nat_dr / 4.0
            b1 = -d.dtheta_nat_dr / 4.0
            assert (a1 * a1 + b1 * b1) * den == pytest.approx(1.0, rel=1e-10)
