import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gammaln

from tra.basis import (BasisSpec, CoordinateMap, MapKind, basis_lower, basis_upper, basis_upper_dx, gauge_away,
                       gram_matrix, gram_matrix_quad, map_apply)
from tra.errors import DomainError, IntegrationError, InvalidBasis, InvalidParameter, LimitUndefined, \
    SingularKineticBalance

ALL_SPECS = [
    BasisSpec.laguerre(CoordinateMap(MapKind.QUADRATIC, 0.8), 0.5),
    BasisSpec.laguerre(CoordinateMap(MapKind.QUADRATIC, 1.3), -0.5),
    BasisSpec.laguerre(CoordinateMap(MapKind.LINEAR, 1.0), 1.0),
    BasisSpec.laguerre(CoordinateMap(MapKind.EXP_DECAY, 1.0, mu_scale=6.0), 2.0),
    BasisSpec.jacobi(CoordinateMap(MapKind.TANH, 1.0), 1.5, 0.5),
    BasisSpec.jacobi(CoordinateMap(MapKind.SHIFTED_EXP, 0.7), 1.0, 2.0),
    BasisSpec.jacobi(CoordinateMap(MapKind.COSINE, 1.0), 0.5, 0.5),
]
SPEC_IDS = [f"{s.cmap.kind.value}-{s.poly}" for s in ALL_SPECS]


class TestMaps:
    def test_tanh_at_origin(self):
        y, d1, d2 = map_apply(CoordinateMap(MapKind.TANH, 1.0), 0.0)
        assert (float(y), float(d1), float(d2)) == (0.0, 1.0, 0.0)

    def test_quadratic(self):
        y, d1, d2 = map_apply(CoordinateMap(MapKind.QUADRATIC, 2.0), 1.0)
        assert (float(y), float(d1), float(d2)) == (4.0, 8.0, 8.0)

    def test_shifted_exp_tends_to_one(self):
        y, _, _ = map_apply(CoordinateMap(MapKind.SHIFTED_EXP, 1.0), 40.0)
        assert float(y) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("kind,x", [(MapKind.QUADRATIC, -0.1), (MapKind.SHIFTED_EXP, -1.0),
                                        (MapKind.COSINE, 3.2), (MapKind.LINEAR, -2.0)])
    def test_outside_domain(self, kind, x):
        with pytest.raises(DomainError):
            map_apply(CoordinateMap(kind, 1.0), x)

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(InvalidParameter):
            CoordinateMap(MapKind.TANH, 0.0)

    @pytest.mark.parametrize("kind", list(MapKind))
    def test_image_and_monotone(self, kind):
        cmap = CoordinateMap(kind, 1.3)
        lo, hi = cmap.x_domain
        x = np.linspace(max(lo, -6), min(hi, 6), 401)[1:-1]
        y, d1, d2 = cmap.apply(x)
        ylo, yhi = cmap.y_domain
        assert np.all((y >= ylo) & (y <= yhi))
        assert np.all(d1 > 0) or np.all(d1 < 0)
        np.testing.assert_allclose(cmap.inverse(y), x, rtol=1e-9, atol=1e-9)
        np.testing.assert_allclose(cmap.dydx_from_y(y), d1, rtol=1e-12, atol=1e-14)

    @pytest.mark.parametrize("kind", list(MapKind))
    def test_derivatives_vs_fd(self, kind):
        cmap = CoordinateMap(kind, 0.9)
        lo, hi = cmap.x_domain
        x = np.linspace(max(lo, -3), min(hi, 3), 23)[2:-2]
        h = 1e-4
        y, d1, d2 = cmap.apply(x)
        yp, ym = cmap.apply(x + h)[0], cmap.apply(x - h)[0]
        np.testing.assert_allclose((yp - ym) / (2 * h), d1, rtol=1e-7, atol=1e-8)
        np.testing.assert_allclose((yp - 2 * y + ym) / h ** 2, d2, rtol=1e-5, atol=1e-5)


class TestConstruction:
    def test_laguerre_constraint(self):
        cmap = CoordinateMap(MapKind.QUADRATIC, 1.0)
        good = BasisSpec.laguerre(cmap, 0.5)
        with pytest.raises(InvalidBasis):
            BasisSpec("laguerre", good.alpha + 0.1, good.beta, good.poly, cmap)
        with pytest.raises(InvalidBasis):
            BasisSpec("laguerre", good.alpha, good.beta * 2, good.poly, cmap)

    def test_jacobi_constraint(self):
        cmap = CoordinateMap(MapKind.TANH, 1.0)
        good = BasisSpec.jacobi(cmap, 1.0, 0.5)
        with pytest.raises(InvalidBasis):
            BasisSpec("jacobi", good.alpha + 0.25, good.beta, good.poly, cmap)
        with pytest.raises(InvalidBasis):
            BasisSpec("jacobi", good.alpha, good.beta - 0.25, good.poly, cmap)

    def test_map_must_match_kind(self):
        with pytest.raises(InvalidBasis):
            BasisSpec.jacobi(CoordinateMap(MapKind.QUADRATIC, 1.0), 0.5, 0.5)

    def test_not_square_integrable(self):
        # on the tanh map the x-measure exponent is 2 alpha - 1 = mu - 1
        with pytest.raises(InvalidBasis):
            BasisSpec.jacobi(CoordinateMap(MapKind.TANH, 1.0), -0.5, 0.5)

    @settings(max_examples=30, deadline=None)
    @given(nu=st.floats(-0.45, 5.0), lam=st.floats(0.2, 4.0))
    def test_laguerre_helper_satisfies_constraint(self, nu, lam):
        spec = BasisSpec.laguerre(CoordinateMap(MapKind.QUADRATIC, lam), nu)
        _, a, b = spec.cmap.shape
        assert 2 * spec.alpha + a == pytest.approx(nu + 1)
        assert 2 * spec.beta - b == pytest.approx(1.0)


class TestUpper:
    def test_laguerre_ground_state(self):
        cmap = CoordinateMap(MapKind.QUADRATIC, 1.0)
        spec = BasisSpec.laguerre(cmap, 0.5)
        x = np.linspace(0.1, 4, 7)
        y = x ** 2
        A0 = math.sqrt(abs(spec.kappa)) * math.exp(-0.5 * gammaln(1.5))
        np.testing.assert_allclose(basis_upper(spec, 0, x), A0 * y ** spec.alpha * np.exp(-spec.beta * y),
                                   rtol=1e-13)

    def test_jacobi_ground_state_at_center(self):
        spec = BasisSpec.jacobi(CoordinateMap(MapKind.TANH, 1.0), 1.0, 1.0)
        assert spec.alpha == spec.beta
        A0 = math.exp(spec.log_norm(0))
        assert basis_upper(spec, 0, 0.0) == pytest.approx(A0, rel=1e-14)

    def test_endpoint_limits(self):
        spec = BasisSpec.laguerre(CoordinateMap(MapKind.QUADRATIC, 1.0), 0.5)
        assert basis_upper(spec, 3, 0.0) == 0.0
        neg = BasisSpec.laguerre(CoordinateMap(MapKind.QUADRATIC, 1.0), -0.9)
        assert neg.alpha < 0
        with pytest.raises(LimitUndefined):
            basis_upper(neg, 0, 0.0)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=SPEC_IDS)
    def test_chain_rule_vs_fd(self, spec):
        lo, hi = spec.cmap.x_domain
        x = np.linspace(max(lo, -4), min(hi, 4), 31)[3:-3]
        h = 1e-3
        for n in (0, 1, 4, 7):
            f = lambda t: basis_upper(spec, n, t)
            fd = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
            an = basis_upper_dx(spec, n, x)
            scale = np.max(np.abs(an)) + 1e-300
            assert np.max(np.abs(an - fd)) / scale < 1e-7


class TestGram:
    @pytest.mark.parametrize("spec", [s for s in ALL_SPECS if s.x_orthonormal],
                             ids=[i for s, i in zip(ALL_SPECS, SPEC_IDS) if s.x_orthonormal])
    def test_identity(self, spec):
        G = gram_matrix(spec, 20)
        assert np.max(np.abs(G - np.eye(21))) < 1e-10

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=SPEC_IDS)
    def test_gauss_matches_adaptive(self, spec):
        np.testing.assert_allclose(gram_matrix(spec, 4), gram_matrix_quad(spec, 4), atol=1e-9)


class TestLower:
    def test_harmonic_kinetic_balance(self):
        kappa, m, eps, eta = 1.4, 1.0, 1.7, 0.8
        spec = BasisSpec.laguerre(CoordinateMap(MapKind.QUADRATIC, kappa / 2), 0.5, eta=eta)
        x = np.linspace(0.2, 5, 13)

        def phi0(t):
            y = (kappa * t / 2) ** 2
            return math.exp(spec.log_norm(0)) * y ** spec.alpha * np.exp(-spec.beta * y)

        # d/dx [A y^a e^{-b y}] = A (a/y - b) y' y^a e^{-b y}, y' = kappa^2 x / 2
        y = (kappa * x / 2) ** 2
        exact = eta / (m + eps) * (spec.alpha / y - spec.beta) * (kappa ** 2 * x / 2) * phi0(x)
        h = 1e-3
        fd = eta / (m + eps) * (-phi0(x + 2 * h) + 8 * phi0(x + h) - 8 * phi0(x - h) + phi0(x - 2 * h)) / (12 * h)
        got = basis_lower(spec, 0, x, 0.0, eps, m)
        np.testing.assert_allclose(got, exact, rtol=1e-12)
        assert np.max(np.abs(got - fd)) < 1e-8 * np.max(np.abs(got))

    def test_constant_pseudoscalar(self):
        spec = ALL_SPECS[4]
        x = np.linspace(-2, 2, 9)
        w0, eps, m = 0.7, 0.4, 1.1
        want = spec.eta / (m + eps) * (w0 * basis_upper(spec, 3, x) + basis_upper_dx(spec, 3, x))
        np.testing.assert_allclose(basis_lower(spec, 3, x, lambda t: w0 + 0 * t, eps, m), want, rtol=1e-14)

    def test_singular(self):
        with pytest.raises(SingularKineticBalance):
            basis_lower(ALL_SPECS[0], 0, 1.0, 0.0, -1.0, 1.0)


class TestGauge:
    def test_zero(self):
        assert np.all(gauge_away(lambda t: 0.0, 0.0, np.linspace(-2, 2, 5)) == 0.0)

    @given(u=st.floats(-5, 5), x=st.floats(-10, 10))
    def test_constant(self, u, x):
        assert gauge_away(u, 0.0, x) == pytest.approx(u * x, rel=1e-12, abs=1e-12)

    def test_cosine(self):
        x = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(gauge_away(np.cos, 0.0, x), np.sin(x), atol=1e-10)

    def test_non_integrable(self):
        with pytest.raises(IntegrationError):
            gauge_away(lambda t: 1.0 / t ** 2, -1.0, 1.0)
