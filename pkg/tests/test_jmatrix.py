import numpy as np
import pytest

import tra.catalog as cat
from tra.basis import BasisSpec, CoordinateMap, MapKind
from tra.errors import NotTridiagonalizable, SingularPrefactor
from tra.jmatrix import (bands_jacobi, bands_laguerre, element_quadrature, linearity, make_bands,
                         quadrature_matrix)
from tra.potentials import PotentialConfig, power, quadratic

KAPPA, M, V0, ETA = 1.0, 1.0, 0.5, 1.0


@pytest.fixture(scope="module")
def harmonic():
    cfg = PotentialConfig(m=M, V=quadratic(V0))
    spec = BasisSpec.laguerre(CoordinateMap(MapKind.QUADRATIC, KAPPA / 2), 0.5, ETA)
    return cfg, spec


class TestLinearity:
    @pytest.mark.parametrize("eps", [0.3, 1.3, 2.9])
    def test_harmonic_rho_sigma(self, harmonic, eps):
        cfg, spec = harmonic
        lin = linearity(cfg, spec, eps)
        assert lin.rho == pytest.approx(4 * (eps + M) * V0 / (ETA * KAPPA ** 4) - 0.25, rel=1e-10)
        assert lin.sigma == pytest.approx((M * M - eps * eps) / (ETA * KAPPA ** 2) + 0.75, abs=1e-10)

    def test_cubic_rejected(self, harmonic):
        _, spec = harmonic
        with pytest.raises(NotTridiagonalizable, match="3/2"):
            linearity(PotentialConfig(m=M, V=power(V0, 3)), spec, 1.0)


class TestBands:
    def test_match_quadrature(self, harmonic):
        cfg, spec = harmonic
        bands = bands_laguerre(linearity(cfg, spec, 1.3), spec, M)
        for eps in (0.4, 1.3, 2.2):
            Q = quadrature_matrix(cfg, spec, eps, 6)
            J = bands.matrix(eps, 6)
            assert np.max(np.abs(Q - J)) < 1e-8 * np.max(np.abs(J))

    def test_diagonal_element(self, harmonic):
        cfg, spec = harmonic
        bands = bands_laguerre(linearity(cfg, spec, 1.3), spec, M)
        assert element_quadrature(cfg, spec, 1.3, 0, 0) == pytest.approx(bands.d(0, 1.3), rel=1e-8)

    def test_symmetric(self, harmonic):
        cfg, spec = harmonic
        Q = quadrature_matrix(cfg, spec, 0.8, 10)
        assert np.max(np.abs(Q - Q.T)) < 1e-9 * np.max(np.abs(Q))

    def test_off_diagonal_vs_quadrature(self, harmonic):
        cfg, spec = harmonic
        bands = bands_laguerre(linearity(cfg, spec, 1.3), spec, M)
        for n in range(4):
            assert bands.c(n, 1.7) == pytest.approx(element_quadrature(cfg, spec, 1.7, n + 1, n), rel=1e-8)

    def test_singular_prefactor(self, harmonic):
        cfg, spec = harmonic
        bands = bands_laguerre(linearity(cfg, spec, 1.3), spec, M)
        with pytest.raises(SingularPrefactor):
            bands.matrix(-M, 3)

    def test_kinetic_balance_is_needed(self, harmonic):
        cfg, spec = harmonic
        eps = 1.3
        scale = np.max(np.abs(bands_laguerre(linearity(cfg, spec, eps), spec, M).matrix(eps, 4)))
        wrong = quadrature_matrix(cfg, spec, eps, 4, lower="identity")
        assert abs(wrong[0, 2]) > 1e-3 * scale

    def test_wrong_kind(self, harmonic):
        cfg, spec = harmonic
        with pytest.raises(ValueError):
            bands_jacobi(linearity(cfg, spec, 1.0), spec, M)


class TestSinusoidal:
    @pytest.mark.parametrize("eps", [1.2, 2.5])
    def test_free_diagonal(self, eps):
        m, kappa = 1.0, 1.5
        bands = make_bands(*cat.tra_for("spin_sinusoidal", {"m": m, "V0": 0.0, "kappa": kappa}))
        d, c = bands.arrays(eps, 6)
        n = np.arange(7)
        # mu = nu = 1/2: n + (mu + nu + 1)/2 = n + 1; prefactor -1/(eps + m)
        np.testing.assert_allclose(d, -(eps ** 2 - m ** 2 - kappa ** 2 * (n + 1) ** 2) / (eps + m), rtol=1e-12)
        assert np.max(np.abs(c)) < 1e-12

    def test_coupling_scales_with_depth(self):
        p = {"m": 1.0, "V0": 0.5, "kappa": 1.5}
        c1 = make_bands(*cat.tra_for("spin_sinusoidal", p)).arrays(1.4, 5)[1]
        c2 = make_bands(*cat.tra_for("spin_sinusoidal", {**p, "V0": 1.0})).arrays(1.4, 5)[1]
        np.testing.assert_allclose(c2, 2 * c1, rtol=1e-10)
