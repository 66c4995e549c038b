import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import trapezoid

import tra.catalog as cat
from tra.errors import InvalidBoundState, MissingParameter, MissingSpectrum, UnknownEntry
from tra.spinor import catalog_field

ALL_IDS = cat.ids()
FINITE_IDS = [e.id for e in cat.entries() if e.finite]


def test_registry_has_every_family():
    expected = {"graphene_tanh", "graphene_morse", "graphene_hulthen", "graphene_constant",
                "graphene_inverse_square", "graphene_sec2", "graphene_sinh2", "pseudospin_oscillator",
                "spin_oscillator", "spin_rosen_morse", "spin_sinusoidal", "general_oscillator", "spin_exp_pair",
                "spin_exp_w", "spin_tanh_pair", "spin_hulthen", "schr_coulomb", "schr_oscillator_inverse_square",
                "schr_morse", "schr_hulthen", "schr_rosen_morse", "schr_sinusoidal"}
    assert expected <= set(ALL_IDS)
    assert all(cat.get(i).description for i in ALL_IDS)


def test_unknown_entry_lists_ids():
    with pytest.raises(UnknownEntry) as info:
        cat.get("nonexistent")
    assert "pseudospin_oscillator" in str(info.value)


class TestOscillator:
    @pytest.mark.parametrize("branch,sign", [("positive", 1), ("negative", -1)])
    def test_free_limit(self, branch, sign):
        for n in range(4):
            assert cat.spectrum("pseudospin_oscillator", {"m": 1.3, "V0": 0.0, "nu": 0.5}, n, branch) == sign * 1.3

    @pytest.mark.parametrize("nu", [-0.5, 0.5])
    @pytest.mark.parametrize("branch", ["positive", "negative"])
    def test_relation(self, nu, branch):
        m, V0 = 1.0, 0.5 if branch == "positive" else -0.5
        for n in range(5):
            e = cat.spectrum("pseudospin_oscillator", {"m": m, "V0": V0, "nu": nu}, n, branch)
            # nu = -1/2 gives n + 1/4, nu = +1/2 gives n + 3/4
            shift = 0.25 if nu == -0.5 else 0.75
            rhs = 4 * math.sqrt(2 * (e - m) * V0) * (n + shift)
            assert e * e - m * m == pytest.approx(rhs, rel=1e-12)

    def test_branch_needs_matching_sign(self):
        with pytest.raises(InvalidBoundState):
            cat.spectrum("pseudospin_oscillator", {"m": 1.0, "V0": 0.5, "nu": 0.5}, 0, "negative")

    def test_odd_ground_state_shape(self):
        lvl = cat.resolve("pseudospin_oscillator", None, 0)
        lam = lvl.derived["lam"]
        x = np.linspace(0.05, 4, 40)
        got = cat.wavefunction_upper("pseudospin_oscillator", None, 0, x, level=lvl)
        want = lam * x * np.exp(-0.5 * (lam * x) ** 2)
        ratio = got / want
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-13)

    def test_unresolved_level(self):
        with pytest.raises(MissingSpectrum):
            cat.wavefunction_upper("pseudospin_oscillator", None, 0, 0.3)
        with pytest.raises(MissingSpectrum):
            cat.wavefunction_upper("pseudospin_oscillator", None, 0, 0.3, eps=1.234)


class TestGraphene:
    def test_tanh_ground_state_is_envelope(self):
        lvl = cat.resolve("graphene_tanh", None, 0)
        a = cat.get("graphene_tanh").defaults["alpha"]
        x = np.linspace(-6, 6, 61)
        got = cat.wavefunction_upper("graphene_tanh", None, 0, x, level=lvl)
        y = np.tanh(a * x)
        mu, nu = lvl.derived["mu"], lvl.derived["nu"]
        env = [(1 - y) ** (p / 2) * (1 + y) ** (q / 2) for p, q in ((mu, nu), (nu, mu))]
        assert any(np.allclose(got / e, (got / e)[30], rtol=1e-9) for e in env)

    @pytest.mark.parametrize("eid", ["graphene_tanh", "graphene_morse", "graphene_hulthen"])
    def test_levels_ordered(self, eid):
        count = cat.level_count(eid)
        vals = [cat.spectrum(eid, None, n) for n in range(count)]
        assert np.all(np.diff(vals) > 0)

    @settings(max_examples=15, deadline=None)
    @given(k=st.floats(3.0, 8.0), S0=st.floats(-10.0, -4.0))
    def test_morse_formula(self, k, S0):
        p = {"k": k, "S0": S0, "alpha": 1.0}
        lvl = cat.resolve("graphene_morse", p, 0)
        g, mu = lvl.derived["gamma"], lvl.derived["mu"]
        assert lvl.eps ** 2 == pytest.approx(k * k - (g / mu + 0.5) ** 2, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("eid", FINITE_IDS)
def test_finite_spectrum_stops(eid):
    e = cat.get(eid)
    for br in e.branches:
        count = cat.level_count(eid, None, br)
        assert count >= 1
        with pytest.raises(InvalidBoundState):
            cat.spectrum(eid, None, e.first(br) + count, br)


@pytest.mark.parametrize("eid", ALL_IDS)
def test_wavefunctions_square_integrable(eid):
    e = cat.get(eid)
    for br in e.branches:
        _, a, b = catalog_field(eid, None, e.first(br), br)
        if e.frame == "schrodinger":
            norm = trapezoid(b * b, a)
        else:
            norm = a.norm  # normalize() raises on a zero or infinite norm
        assert math.isfinite(norm) and norm > 0


def test_entry_parameters_validated():
    with pytest.raises(MissingParameter):
        cat.spectrum("spin_sinusoidal", {"m": 1.0, "V0": 0.5}, 0)
