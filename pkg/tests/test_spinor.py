import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tra.errors import GridError, SingularCoupling, ZeroField
from tra.potentials import PotentialConfig, family, quadratic
from tra.spinor import (SpinorField, assemble, catalog_field, catalog_residual, default_grid, dirac_residual,
                        normalize, to_dirac)

GRID = np.linspace(-6, 6, 801)


def gauss(x):
    return np.exp(-0.5 * np.asarray(x) ** 2)


gauss.derivative = lambda x: -np.asarray(x) * gauss(x)


class TestAssemble:
    def test_spin_symmetric_lower(self):
        m, eps = 1.0, 1.7
        V = quadratic(0.5)
        f = assemble(gauss, PotentialConfig(m=m, S=V, V=V), eps, GRID)
        np.testing.assert_allclose(f.lower, gauss.derivative(GRID) / (m + eps), rtol=1e-14)

    def test_numeric_derivative_when_rule_has_none(self):
        cfg = PotentialConfig(m=1.0, S=quadratic(0.5), V=quadratic(0.5))
        exact = assemble(gauss, cfg, 1.7, GRID)
        numeric = assemble(lambda x: gauss(x), cfg, 1.7, GRID)
        np.testing.assert_allclose(numeric.lower, exact.lower, atol=1e-10)

    def test_upper_samples_untouched(self):
        cfg = PotentialConfig(m=1.0, V=quadratic(0.05))
        f = assemble(gauss, cfg, 2.5, GRID)
        assert np.array_equal(f.upper, gauss(GRID))

    def test_weyl_lower_given(self):
        k, S0, eps = 0.5, 2.0, 1.1
        cfg = PotentialConfig(m=k, S=family("tanh", c=S0, lam=1.0))
        f = assemble(gauss, cfg, eps, GRID, component="lower", frame="weyl")
        F = k + S0 * np.tanh(GRID)
        np.testing.assert_allclose(f.upper, (gauss.derivative(GRID) + F * gauss(GRID)) / eps, rtol=1e-14)
        assert np.array_equal(f.lower, gauss(GRID))

    def test_weyl_zero_energy(self):
        cfg = PotentialConfig(m=0.5, S=family("tanh", c=2.0, lam=1.0))
        with pytest.raises(SingularCoupling):
            assemble(gauss, cfg, 0.0, GRID, frame="weyl")

    def test_vanishing_denominator(self):
        # eps + m + S - V = 2 - x^2 changes sign inside the grid
        cfg = PotentialConfig(m=1.0, V=quadratic(1.0))
        with pytest.raises(SingularCoupling, match="x ="):
            assemble(gauss, cfg, 1.0, GRID)

    def test_short_grid(self):
        with pytest.raises(GridError):
            SpinorField(np.linspace(0, 1, 8), np.ones(8), np.ones(8), 1.0, 1.0)


class TestNormalize:
    @settings(max_examples=25, deadline=None)
    @given(scale=st.floats(1e-3, 1e3), eps=st.floats(0.2, 4.0))
    def test_unit_norm_and_idempotent(self, scale, eps):
        cfg = PotentialConfig(m=1.0, S=quadratic(0.3), V=quadratic(0.3))
        rule = lambda x: scale * gauss(x)
        once = normalize(assemble(rule, cfg, eps, GRID))
        twice = normalize(once)
        assert abs(once.norm - 1) < 1e-10
        np.testing.assert_allclose(twice.upper, once.upper, rtol=1e-13)
        np.testing.assert_allclose(twice.lower, once.lower, rtol=1e-13, atol=1e-300)

    def test_zero_field(self):
        z = np.zeros(32)
        with pytest.raises(ZeroField):
            normalize(SpinorField(np.linspace(0, 1, 32), z, z, 1.0, 0.0))

    def test_frame_rotation_preserves_norm(self):
        cfg = PotentialConfig(m=0.5, S=family("tanh", c=2.0, lam=1.0))
        f = normalize(assemble(gauss, cfg, 1.3, GRID, frame="weyl"))
        assert to_dirac(f).norm == pytest.approx(1.0, abs=1e-12)


class TestResidual:
    def test_oscillator_ground_state(self):
        assert catalog_residual("spin_oscillator", None, 0) < 1e-6
        assert catalog_residual("pseudospin_oscillator", None, 0) < 1e-6

    def test_detuned(self):
        assert catalog_residual("pseudospin_oscillator", None, 0, eps_shift=0.1) > 1e-2

    def test_non_uniform_grid(self):
        x = np.cumsum(np.linspace(0.01, 0.02, 100))
        f = assemble(gauss, PotentialConfig(m=1.0), 2.0, x)
        with pytest.raises(GridError):
            dirac_residual(f, PotentialConfig(m=1.0))

    @settings(max_examples=20, deadline=None)
    @given(eps=st.floats(-5, 5).filter(lambda e: abs(e + 1) > 0.05), m=st.just(1.0))
    def test_total_for_free_config(self, eps, m):
        cfg = PotentialConfig(m=m)
        assert math.isfinite(dirac_residual(assemble(gauss, cfg, eps, GRID), cfg))

    @pytest.mark.parametrize("eid", ["spin_rosen_morse", "graphene_morse"])
    def test_grid_convergence(self, eid):
        # fourth-order stencil: halving the spacing cuts the residual by about 16
        res = [catalog_residual(eid, None, 0, npts=n) for n in (257, 513, 1025)]
        for coarse, fine in zip(res, res[1:]):
            assert fine < 1e-10 or coarse / fine >= 8


class TestCatalogGlue:
    def test_default_grid_covers_envelope(self):
        x = default_grid(gauss, (-math.inf, math.inf), 4096)
        assert x.size == 4096
        assert gauss(x[0]) < 1e-9 and gauss(x[-1]) < 1e-9

    def test_finite_domain_stays_inside(self):
        rule = lambda x: np.sin(np.asarray(x)) ** 2
        x = default_grid(rule, (0.0, math.pi), 512)
        assert x[0] > 0 and x[-1] < math.pi

    def test_catalog_field_normalized(self):
        lvl, field, cfg = catalog_field("spin_rosen_morse", None, 1)
        assert field.eps == lvl.eps
        assert abs(field.norm - 1) < 1e-10
