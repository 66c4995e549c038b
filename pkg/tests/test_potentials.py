import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tra.errors import DomainError, InvalidParameter, NotReducible
from tra.potentials import (FAMILY_NAMES, Potential, PotentialConfig, SymmetryClass, Term, classify, constant,
                            family, power, quadratic, reduce)

X = np.linspace(-3, 3, 41)


class TestTerms:
    def test_registered_families_only(self):
        with pytest.raises(InvalidParameter):
            Term("gaussian", c=1.0, lam=1.0)
        with pytest.raises(InvalidParameter):
            Term("tanh", c=1.0)
        with pytest.raises(InvalidParameter):
            Term("power", c=1.0, p=0.5)

    @pytest.mark.parametrize("name", [f for f in FAMILY_NAMES if f not in ("zero", "constant", "power")])
    def test_derivative_vs_fd(self, name):
        pot = family(name, c=0.7, lam=0.9)
        x = np.linspace(0.2, 1.5, 9)
        h = 1e-5
        fd = (pot(x + h) - pot(x - h)) / (2 * h)
        np.testing.assert_allclose(pot.derivative(x), fd, rtol=1e-7)

    @pytest.mark.parametrize("name,point", [("hulthen", 0.0), ("coth", 0.0), ("csch2", 0.0),
                                            ("tan", math.pi / 2), ("sec2", -math.pi / 2)])
    def test_singular_points(self, name, point):
        pot = family(name, c=1.0, lam=1.0)
        assert any(abs(p - point) < 1e-12 for p in pot.singular_points(-2, 2))
        with pytest.raises(DomainError):
            pot(np.array([point]))

    def test_inverse_power_singular_at_origin(self):
        with pytest.raises(DomainError):
            power(1.0, -2)(0.0)

    def test_sum_and_scale(self):
        pot = quadratic(2.0) + family("tanh", c=1.0, lam=1.0)
        np.testing.assert_allclose(pot(X), 2 * X ** 2 + np.tanh(X), rtol=1e-15)
        np.testing.assert_allclose((-pot)(X), -pot(X), rtol=1e-15)


class TestClassify:
    def test_spin_symmetric(self):
        V = quadratic(0.5)
        assert classify(PotentialConfig(m=1.0, S=V, V=V)) is SymmetryClass.SPIN_SYMMETRIC

    def test_pseudospin_symmetric(self):
        assert classify(PotentialConfig(m=1.0, S=quadratic(-0.5), V=quadratic(0.5))) \
            is SymmetryClass.PSEUDOSPIN_SYMMETRIC

    def test_scalar_only(self):
        cfg = PotentialConfig(m=0.5, S=family("tanh", c=2.0, lam=1.0))
        assert classify(cfg) is SymmetryClass.SCALAR_ONLY

    def test_pseudoscalar_only(self):
        assert classify(PotentialConfig(m=1.0, W=family("tanh", c=1.0, lam=1.0))) \
            is SymmetryClass.PSEUDOSCALAR_ONLY

    def test_general(self):
        cfg = PotentialConfig(m=1.0, V=quadratic(0.5))
        assert classify(cfg) is SymmetryClass.GENERAL
        with pytest.raises(NotReducible):
            reduce(cfg)

    def test_relabeling_invariance(self):
        # the same function written with different terms
        S = Potential.of(power(0.25, 2).terms[0], power(0.25, 2).terms[0])
        V = Potential.of(Term("power", c=0.5, p=2))
        assert classify(PotentialConfig(m=1.0, S=S, V=V)) is SymmetryClass.SPIN_SYMMETRIC
        # sech^2 - 1 = -tanh^2 is not a registered term, but the order of terms must not matter
        S2 = Potential.of(Term("sech2", c=1.0, lam=1.0), Term("constant", c=-1.0))
        V2 = Potential.of(Term("constant", c=-1.0), Term("sech2", c=1.0, lam=1.0))
        assert classify(PotentialConfig(m=1.0, S=S2, V=V2)) is SymmetryClass.SPIN_SYMMETRIC


class TestReduce:
    def test_scalar_tanh(self):
        k, S0, a = 0.5, 3.0, 1.2
        cfg = PotentialConfig(m=k, S=family("tanh", c=S0, lam=a))
        eff = reduce(cfg)
        want = 0.5 * ((k + S0 * np.tanh(a * X)) ** 2 + S0 * a / np.cosh(a * X) ** 2)
        np.testing.assert_allclose(eff.U(X, 0.7), want, rtol=1e-14)
        assert eff.E(0.7) == pytest.approx(0.5 * 0.49)

    def test_spin_symmetric_rosen_morse(self):
        m, V0, W0, a = 1.0, -1.0, 2.0, 1.0
        V = family("sech2", c=V0, lam=a)
        cfg = PotentialConfig(m=m, S=V, V=V, W=family("tanh", c=W0, lam=a))
        eff = reduce(cfg)
        eps = 0.4
        W, dW = W0 * np.tanh(a * X), W0 * a / np.cosh(a * X) ** 2
        want = 0.5 * (W ** 2 - dW) + (eps + m) * V0 / np.cosh(a * X) ** 2
        np.testing.assert_allclose(eff.U(X, eps), want, rtol=1e-13, atol=1e-14)
        assert eff.E(eps) == pytest.approx(0.5 * (eps * eps - m * m))

    def test_free(self):
        eff = reduce(PotentialConfig(m=1.3))
        np.testing.assert_allclose(eff.U(X, 0.2), 0.5 * 1.3 ** 2)
        assert eff.E(0.2) == pytest.approx(0.02)

    @settings(max_examples=25, deadline=None)
    @given(k=st.floats(-3, 3), S0=st.floats(-4, 4), a=st.floats(0.2, 3))
    def test_supersymmetric_partners(self, k, S0, a):
        cfg = PotentialConfig(m=k, S=family("tanh", c=S0, lam=a))
        up = reduce(cfg, SymmetryClass.SCALAR_ONLY, "+").U(X, 1.0)
        dn = reduce(cfg, SymmetryClass.SCALAR_ONLY, "-").U(X, 1.0)
        dF = S0 * a / np.cosh(a * X) ** 2
        np.testing.assert_allclose(up - dn, dF, rtol=0, atol=1e-12 * (1 + (k + abs(S0)) ** 2))


def test_ingest_removes_vector_potential():
    cfg = PotentialConfig(m=1.0, V=quadratic(1.0), U=constant(0.3))
    clean, phase = cfg.ingest()
    assert clean.U is None
    np.testing.assert_allclose(phase(np.array([0.0, 1.0, -2.0])), [0.0, 0.3, -0.6], atol=1e-12)
