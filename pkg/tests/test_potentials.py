import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ssip.potentials import (CrossSectionPair, Exponential, HardSphere, LJComposite, LennardJones,
                             LongRangeMonopole, Power, ShortRangeSmallSep, analytic_reference,
                             c_cylinder_small_sep, c_small_sep, default_reg_gap, line_integral_factor,
                             lj_cylinder_characteristics, lj_disk_characteristics, lj_point_characteristics,
                             point_pair, regularize_lj, ssip_eval)

UNIT = CrossSectionPair(1.0, 1.0, rho_product=1.0)


def fd(law, x, h=1e-6):
    vp, dp, _ = law.evaluate(x * (1 + h))
    vm, dm, _ = law.evaluate(x * (1 - h))
    return (vp - vm) / (2 * h * x), (dp - dm) / (2 * h * x)


class TestPointLaws:
    def test_lj_minimum(self):
        lj = LennardJones(-2.0, 1.5)
        phi, dphi = point_pair(lj, 1.5)
        assert phi == pytest.approx(-2.0)
        assert dphi == pytest.approx(0.0, abs=1e-12)

    def test_lj_pull_off(self):
        r_eq, r_fmin, f = lj_point_characteristics(-1.0, 1.0)
        assert r_fmin == pytest.approx((13 / 7) ** (1 / 6))
        assert abs(f) == pytest.approx(2.6899, rel=1e-4)

    @pytest.mark.parametrize("law", [Power(2.0, 1), Power(-1.0, 6), LennardJones(-1, 1), Exponential(1.0, 0.5)])
    def test_derivative(self, law):
        r, h = 1.3, 1e-6
        _, d = point_pair(law, r)
        fd_d = (point_pair(law, r + h)[0] - point_pair(law, r - h)[0]) / (2 * h)
        assert d == pytest.approx(fd_d, rel=1e-7)

    def test_hard_sphere_is_zero(self):
        assert point_pair(HardSphere(), 0.5) == (0.0, 0.0)

    @pytest.mark.parametrize("make", [lambda: Power(1, 0), lambda: LennardJones(1.0, 1.0),
                                      lambda: LennardJones(-1.0, 0.0)])
    def test_invalid(self, make):
        with pytest.raises(ValueError):
            make()


class TestCoefficients:
    def test_disk_vdw_coefficient(self):
        assert c_small_sep(6, 1.0, UNIT) == pytest.approx(3 * math.pi**2 / 256, rel=1e-14)

    def test_cylinder_coefficients(self):
        assert c_cylinder_small_sep(6, 1.0, UNIT) == pytest.approx(math.pi**2 / 24, rel=1e-14)
        assert c_cylinder_small_sep(12, 1.0, UNIT) / math.pi**2 == pytest.approx(5.81868e-4, rel=1e-5)

    @pytest.mark.parametrize("m", [4, 6, 12])
    def test_line_integral_factor(self, m):
        s = np.linspace(-200, 200, 400001)
        num = np.trapezoid((1 + s * s) ** (-m / 2), s)
        assert line_integral_factor(m) == pytest.approx(num, rel=1e-5)

    def test_small_sep_requires_short_range(self):
        with pytest.raises(ValueError):
            c_small_sep(3, 1.0, UNIT)

    def test_missing_densities(self):
        with pytest.raises(ValueError):
            CrossSectionPair(1, 1).rho()
        with pytest.raises(ValueError):
            CrossSectionPair(1, 1).lambdas()

    @given(st.floats(0.1, 10), st.floats(0.1, 10))
    def test_radius_factor_symmetric(self, a, b):
        assert CrossSectionPair(a, b).radius_factor == pytest.approx(CrossSectionPair(b, a).radius_factor)


class TestSectionLaws:
    @pytest.mark.parametrize("law,x", [
        (ShortRangeSmallSep(c_small_sep(6, -1.0, UNIT), 6), 0.03),
        (LongRangeMonopole(3.0, 1), 2.5),
        (LJComposite.from_lj(-1.0, 0.1, UNIT), 0.08),
    ])
    def test_derivatives(self, law, x):
        _, d1, d2 = law.evaluate(x)
        f1, f2 = fd(law, x)
        assert d1 == pytest.approx(f1, rel=1e-7)
        assert d2 == pytest.approx(f2, rel=1e-7)

    def test_matches_closed_form_references(self):
        g = np.array([1e-3, 1e-2, 0.1])
        law = ShortRangeSmallSep(c_small_sep(6, -1.0, UNIT), 6)
        np.testing.assert_allclose(law.evaluate(g)[0], analytic_reference("disk_par_ss", UNIT, g, 1.0), rtol=1e-13)
        far = LongRangeMonopole.volume(-1.0, 6, UNIT)
        d = np.array([5.0, 50.0])
        np.testing.assert_allclose(far.evaluate(d)[0], analytic_reference("disk_par_ls", UNIT, d, 1.0), rtol=1e-13)
        cyl = -c_cylinder_small_sep(6, 1.0, UNIT) * g**-1.5
        np.testing.assert_allclose(cyl, analytic_reference("cyl_par_ss", UNIT, g, 1.0), rtol=1e-13)

    def test_surface_monopole(self):
        pair = CrossSectionPair(1, 1, lambda1=2.0, lambda2=-3.0)
        assert LongRangeMonopole.surface(0.5, 1, pair).c_pref == pytest.approx(-3.0)

    def test_nonpositive_gap_raises(self):
        with pytest.raises(ValueError):
            ShortRangeSmallSep(1.0, 6).evaluate(np.array([0.1, -0.1]))

    @given(st.floats(0.01, 100))
    def test_scaling_is_linear(self, f):
        law = LJComposite.from_lj(-1.0, 0.1, UNIT)
        np.testing.assert_allclose(law.scaled(f).evaluate(0.07), np.array(law.evaluate(0.07)) * f, rtol=1e-13)

    def test_ssip_eval_rejects_point_law(self):
        with pytest.raises(TypeError):
            ssip_eval(Power(1, 1), 1.0)

    def test_unknown_reference(self):
        with pytest.raises(ValueError):
            analytic_reference("sphere", UNIT, 1.0, 1.0)


class TestLJConstants:
    def test_disk(self):
        g_eq, g_f, f = lj_disk_characteristics(-1.0, 1.0, UNIT)
        law = LJComposite.from_lj(-1.0, 1.0, UNIT)
        assert law.evaluate(g_eq)[1] == pytest.approx(0.0, abs=1e-12)
        assert law.evaluate(g_f)[2] == pytest.approx(0.0, abs=1e-10)
        assert f == pytest.approx(-law.evaluate(g_f)[1])

    @pytest.mark.parametrize("scale", [0.5, 3.0])
    def test_independent_of_radius_and_density(self, scale):
        pair = CrossSectionPair(scale, scale, rho_product=scale**2)
        a = lj_cylinder_characteristics(-1.0, 1.0, UNIT)
        b = lj_cylinder_characteristics(-1.0, 1.0, pair)
        assert a[0] == pytest.approx(b[0]) and a[1] == pytest.approx(b[1])


class TestRegularization:
    law = LJComposite.from_lj(-1.0, 0.01, UNIT)
    g_reg = default_reg_gap(0.01)

    def test_default_gap(self):
        assert self.g_reg / 0.01 == pytest.approx(0.57169, rel=1e-4)

    def test_c1_force_at_switch(self):
        reg = regularize_lj(self.law, self.g_reg)
        eps = 1e-9 * self.g_reg
        lo = reg.evaluate(self.g_reg - eps)
        hi = reg.evaluate(self.g_reg + eps)
        for a, b in zip(lo, hi):
            assert float(a) == pytest.approx(float(b), rel=1e-6)

    @given(st.floats(0.0, 0.999))
    def test_linear_force_below(self, frac):
        reg = regularize_lj(self.law, self.g_reg)
        g = frac * self.g_reg
        assert float(reg.force(g)) == pytest.approx(reg.a * g + reg.b, rel=1e-12, abs=1e-12 * abs(reg.b))

    def test_identical_above(self):
        reg = regularize_lj(self.law, self.g_reg)
        g = np.array([1.0, 2.0, 5.0]) * self.g_reg
        np.testing.assert_array_equal(np.array(reg.evaluate(g)), np.array(self.law.evaluate(g)))

    def test_finite_at_zero_and_negative_gap(self):
        reg = regularize_lj(self.law, self.g_reg)
        assert np.all(np.isfinite(reg.evaluate(np.array([0.0, -0.5 * self.g_reg]))))

    def test_scaled(self):
        reg = regularize_lj(self.law, self.g_reg).scaled(2.0)
        ref = regularize_lj(self.law.scaled(2.0), self.g_reg)
        np.testing.assert_allclose(reg.evaluate(0.3 * self.g_reg), ref.evaluate(0.3 * self.g_reg), rtol=1e-13)

    def test_invalid_gap(self):
        with pytest.raises(ValueError):
            regularize_lj(self.law, 0.0)
