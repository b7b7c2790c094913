import math

import numpy as np
import pytest

from schwarzmod import (
    STANDARD_TOL,
    DegenerateInputError,
    DomainError,
    QuadrilateralSpec,
    SchwarzParams,
    fit_circle_imag_axis,
    fit_circle_real_axis,
    probe_geometry,
    quad_from_alpha_j,
)

Q4 = SchwarzParams(math.asin(1 / 3), 2 / 3)
FAMILY = [(math.pi / n, j) for n in range(4, 9) for j in range(1, 6)]


class TestSpec:
    def test_valid(self):
        spec = QuadrilateralSpec(math.sqrt(1.5), math.sqrt(3), math.sqrt(0.5), math.sqrt(2))
        assert spec.k == pytest.approx(math.sqrt(2))
        assert spec.K == pytest.approx(2)

    def test_tangency_violation_names_the_invariant(self):
        with pytest.raises(DomainError, match="tangency"):
            QuadrilateralSpec(1.5, 1.5, 1.0, 1.0)

    @pytest.mark.parametrize("bad", [(0, 1, 1, 1), (-1, 1, 1, 1), (math.nan, 1, 1, 1)])
    def test_positive(self, bad):
        with pytest.raises(DomainError):
            QuadrilateralSpec(*bad)

    def test_swapped(self):
        spec = quad_from_alpha_j(math.pi / 5, 3)
        sw = spec.swapped()
        assert (sw.t, sw.s, sw.r1, sw.r2) == (spec.s, spec.t, spec.r2, spec.r1)
        assert sw.k == pytest.approx(1 / spec.k)


class TestFamily:
    def test_symmetric_member(self):
        spec = quad_from_alpha_j(math.pi / 4, 5)
        assert spec.t == pytest.approx(math.sqrt(2), rel=1e-15)
        assert spec.s == pytest.approx(math.sqrt(2), rel=1e-15)
        assert spec.r1 == pytest.approx(1, rel=1e-15)
        assert spec.r2 == pytest.approx(1, rel=1e-15)

    def test_pi5_j3(self):
        spec = quad_from_alpha_j(math.pi / 5, 3)
        expect = (1.1416407864998739, 2.0174131664886366, 0.6753740370343625, 1.642663833605752)
        assert (spec.t, spec.s, spec.r1, spec.r2) == pytest.approx(expect, rel=1e-15)

    def test_closed_forms(self):
        # the two members given in closed form alongside the table
        s2 = math.sqrt(2)
        q1 = quad_from_alpha_j(math.pi / 4, 1)
        assert q1.t == pytest.approx((4 + s2) / 5, rel=1e-14)
        assert q1.s == pytest.approx((20 + 19 * s2) / 23, rel=1e-14)
        assert q1.r1 == pytest.approx(math.sqrt(33 - 12 * s2) / 5, rel=1e-14)
        assert q1.r2 == pytest.approx(math.sqrt(777 + 300 * s2) / 23, rel=1e-14)
        q2 = quad_from_alpha_j(math.pi / 8, 5)
        assert q2.t == pytest.approx(1 / math.cos(math.pi / 8), rel=1e-14)
        assert q2.s == pytest.approx(1 / math.sin(math.pi / 8), rel=1e-14)
        assert q2.r1 == pytest.approx(math.tan(math.pi / 8), rel=1e-14)
        assert q2.r2 == pytest.approx(1 + s2, rel=1e-14)

    @pytest.mark.parametrize("alpha,j", FAMILY)
    def test_tangency(self, alpha, j):
        spec = quad_from_alpha_j(alpha, j)
        rr = (spec.r1 + spec.r2) ** 2
        assert abs(spec.t**2 + spec.s**2 - rr) <= 1e-12 * rr
        # the vertex exp(i alpha) lies on both circles
        z = complex(math.cos(alpha), math.sin(alpha))
        assert abs(z - spec.t) == pytest.approx(spec.r1, rel=1e-14)
        assert abs(z - 1j * spec.s) == pytest.approx(spec.r2, rel=1e-14)

    @pytest.mark.parametrize("args", [(0.0, 1), (math.pi / 2, 1), (0.5, 0), (0.5, 6), (0.5, 2.5)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            quad_from_alpha_j(*args)


class TestFits:
    def test_real_axis_examples(self):
        assert fit_circle_real_axis(2, 1, 1) == pytest.approx((1, 1))
        assert fit_circle_real_axis(0.5, 0.4, 0.3) == pytest.approx((0, 0.5), abs=1e-15)
        with pytest.raises(DegenerateInputError):
            fit_circle_real_axis(0.3, 0.3, 1.0)

    def test_imag_axis_examples(self):
        assert fit_circle_imag_axis(1, 1, 2) == pytest.approx((1, 1))
        with pytest.raises(DegenerateInputError):
            fit_circle_imag_axis(0.4, 0.7, 0.7)

    def test_axis_exchange(self):
        rng = np.random.default_rng(5)
        for a, b, c in rng.normal(size=(20, 3)):
            assert fit_circle_imag_axis(a, b, c) == pytest.approx(fit_circle_real_axis(c, b, a))

    def test_points_lie_on_circle(self):
        rng = np.random.default_rng(6)
        for x1, x2, y2 in rng.normal(size=(50, 3)):
            T, R = fit_circle_real_axis(x1, x2, y2)
            assert abs((x1 - T) ** 2 - R**2) <= 1e-12 * R**2
            assert abs((x2 - T) ** 2 + y2**2 - R**2) <= 1e-12 * R**2 * max(1, abs(T) / R) ** 2


class TestProbeGeometry:
    def test_q4(self):
        g = probe_geometry(Q4)
        assert abs(g.ratio_st - math.sqrt(2)) <= 1e-6
        assert abs(g.ratio_r - 2) <= 1e-6

    def test_listing_configuration(self):
        # rounded published output, solved orientation beta = pi/2 - 1.02791
        g = probe_geometry(SchwarzParams(math.pi / 2 - 1.02791, 0.440765))
        spec = quad_from_alpha_j(math.pi / 5, 3)
        assert g.ratio_st == pytest.approx(spec.k, rel=1e-4)
        assert g.ratio_r == pytest.approx(spec.K, rel=1e-4)

    # away from the interval ends; at theta2 -> 0 (theta3 -> pi/2) the fit
    # divides by x2 - x1 -> 0 (y3 - y4 -> 0) and amplifies rounding
    FRACTIONS = [0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9]
    PARAMS = [Q4, SchwarzParams(0.5428896210992893, 0.440763551034728), SchwarzParams(1.2, -0.3)]

    @pytest.mark.parametrize("params", PARAMS)
    def test_theta2_invariance(self, params):
        base = probe_geometry(params)
        tol = 2 * STANDARD_TOL.rel_tol
        for frac in self.FRACTIONS:
            moved = probe_geometry(params, theta2=frac * params.beta)
            assert abs(moved.T - base.T) <= tol * abs(base.T)
            assert abs(moved.R1 - base.R1) <= tol * abs(base.R1)

    @pytest.mark.parametrize("params", PARAMS)
    def test_theta3_invariance(self, params):
        base = probe_geometry(params)
        tol = 2 * STANDARD_TOL.rel_tol
        for frac in self.FRACTIONS:
            th3 = params.beta + frac * (math.pi / 2 - params.beta)
            moved = probe_geometry(params, theta3=th3)
            assert abs(moved.S - base.S) <= tol * abs(base.S)
            assert abs(moved.R2 - base.R2) <= tol * abs(base.R2)

    def test_reflection(self):
        from schwarzmod import solve_ray

        for th in (0.1, 0.2, 0.8, 1.3):
            a = solve_ray(Q4, th).f_end
            b = solve_ray(Q4, math.pi - th).f_end
            assert abs(b - complex(-a.real, a.imag)) <= 1e-10 * abs(a)
