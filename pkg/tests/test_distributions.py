"""Unit tests for the two-photon density constructors."""

import math

import numpy as np
import pytest

from spdc_ng.distributions import (DegenerateSliceError, Params, Physical,
                                   conditional_of, eval_density,
                                   gaussian_equivalent, make_density,
                                   marginal_of)
from spdc_ng.quadrature import QuadTolerance, integrate_1d
from spdc_ng.specfun import shape_constants

TOL = QuadTolerance()


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            Params(p=0.0)
        with pytest.raises(ValueError):
            Params(p=1.0, sigma=0.5)

    def test_from_physical_round_trip(self):
        pr = Params.from_physical(crystal_length=5e-3, pump_wavenumber=1.5e7,
                                  beam_waist=3e-4, plane_z=0.0)
        z0 = 1.5e7 * (3e-4) ** 2 / 2.0
        assert pr.p == pytest.approx(math.sqrt(5e-3 / (2 * z0)))
        assert pr.sigma == 1.0

    def test_inconsistent_provenance_rejected(self):
        phys = Physical(5e-3, 1.5e7, 3e-4)
        with pytest.raises(ValueError):
            Params(p=0.3, sigma=1.0, physical=phys)


class TestNormalization:
    @pytest.mark.parametrize("plane", ("far_field", "near_field"))
    @pytest.mark.parametrize("p", (0.05, 0.5, 1.0, 2.0, 5.0))
    @pytest.mark.parametrize("sigma", (1.0, 2.0))
    def test_joint_normalized(self, plane, p, sigma):
        if plane == "far_field" and sigma != 1.0:
            pytest.skip("far-field factors do not involve sigma")
        j = make_density(plane, "spdc", "joint", Params(p=p, sigma=sigma), TOL)
        zu, _ = integrate_1d(j.factor_plus, j.dom_plus, TOL)
        zv, _ = integrate_1d(j.factor_minus, j.dom_minus, TOL)
        assert j.norm * zu * zv == pytest.approx(1.0, abs=1e-6)

    def test_far_norm_closed_form(self):
        for p in (0.3, 1.0, 2.5):
            j = make_density("far_field", "spdc", "joint", Params(p=p), TOL)
            assert j.norm == pytest.approx(3.0 * p / (4.0 * math.sqrt(2.0)
                                                      * math.pi), rel=1e-7)

    def test_near_norm_closed_form(self):
        sc = shape_constants(TOL)
        for p, sigma in ((0.3, 1.0), (1.3, 1.0), (0.8, 2.0)):
            j = make_density("near_field", "spdc", "joint",
                             Params(p=p, sigma=sigma), TOL)
            ref = 1.0 / (math.sqrt(2.0 * math.pi) * sc.a1 * sigma * p)
            assert j.norm == pytest.approx(ref, rel=1e-7)

    @pytest.mark.parametrize("plane", ("far_field", "near_field"))
    def test_marginal_and_conditional_normalized(self, plane):
        j = make_density(plane, "spdc", "joint", Params(p=1.0), TOL)
        for spec in (marginal_of(j, TOL), conditional_of(j, 0.4, TOL)):
            v, _ = integrate_1d(spec.pdf1, spec.domain(), TOL,
                                seed_points=spec.seeds)
            assert v == pytest.approx(1.0, abs=1e-6)


class TestStructure:
    @pytest.mark.parametrize("plane", ("far_field", "near_field"))
    def test_exchange_symmetry(self, plane):
        j = make_density(plane, "spdc", "joint", Params(p=0.7), TOL)
        for (a, b) in ((0.3, -1.1), (2.0, 0.5)):
            assert eval_density(j, a, b) == pytest.approx(
                eval_density(j, b, a), rel=1e-14)

    @pytest.mark.parametrize("plane", ("far_field", "near_field"))
    def test_factorization_identity(self, plane):
        j = make_density(plane, "spdc", "joint", Params(p=1.0), TOL)
        marg = marginal_of(j, TOL)
        for (x1, x2) in ((0.3, 0.4), (1.1, -0.6)):
            cond = conditional_of(j, x2, TOL)
            assert cond(x1) * marg.pdf1(x2) == pytest.approx(
                eval_density(j, x1, x2), rel=1e-9)

    def test_marginal_table_matches_direct_quadrature(self):
        # Spot values across bulk and power-law tail (near field, P = 3).
        from scipy.integrate import quad
        from scipy.special import sici
        p = 3.0
        j = make_density("near_field", "spdc", "joint", Params(p=p), TOL)
        m = marginal_of(j, TOL)

        def sint2(y):
            si, _ = sici(y)
            return (1.0 - 2.0 / math.pi * si) ** 2

        for x2 in (0.0, 2.0, 10.0, 35.0):
            z = math.sqrt(2.0) * x2
            ref, _ = quad(lambda w: math.exp(-w * w)
                          * sint2((w - z) ** 2 / (2 * p * p)),
                          -8, 8, limit=2000, epsabs=1e-14, epsrel=1e-12)
            ref *= j.norm * math.sqrt(2.0)
            assert float(m.pdf1(x2)) == pytest.approx(ref, rel=1e-6)

    def test_degenerate_slice_raises(self):
        j = make_density("far_field", "gaussian", "joint", Params(p=1.0), TOL,
                         alpha=0.72)
        with pytest.raises(DegenerateSliceError):
            conditional_of(j, 60.0, TOL)

    def test_bad_labels_rejected(self):
        with pytest.raises(ValueError):
            make_density("mid_field", "spdc", "joint", Params(p=1.0))
        with pytest.raises(ValueError):
            make_density("far_field", "spdc", "slice", Params(p=1.0))


class TestGaussianModel:
    def test_marginal_is_exact_normal(self):
        j = make_density("near_field", "gaussian", "joint", Params(p=1.2),
                         TOL, alpha=0.72)
        m = marginal_of(j, TOL)
        var = 0.5 * (0.5 * j.g_width ** 2 + 0.5 * j.k_width ** 2)
        x = np.linspace(-4.0, 4.0, 9)
        ref = np.exp(-x * x / (2 * var)) / math.sqrt(2 * math.pi * var)
        np.testing.assert_allclose(m.pdf1(x), ref, rtol=1e-12)

    def test_conditional_variance_closed_form(self):
        # var(x1 | x2 = 0) = (g^2 k^2) / (g^2 + k^2) in half-width units.
        from spdc_ng.moments import moments_1d
        alpha, p = 0.45, 0.8
        j = make_density("far_field", "gaussian", "joint", Params(p=p), TOL,
                         alpha=alpha)
        _, var = moments_1d(conditional_of(j, 0.0, TOL), TOL)
        assert var == pytest.approx(1.0 / (1.0 + alpha * p * p), rel=1e-8)

    def test_gaussian_equivalent_matches_covariance(self):
        from spdc_ng.moments import covariance_numeric
        for plane in ("far_field", "near_field"):
            j = make_density(plane, "spdc", "joint", Params(p=0.9), TOL)
            g = gaussian_equivalent(j, TOL)
            cj = covariance_numeric(j, TOL)
            cg = covariance_numeric(g, TOL)
            assert cg.var1 == pytest.approx(cj.var1, rel=1e-6)
            assert cg.cov == pytest.approx(cj.cov, rel=1e-5, abs=1e-8)
