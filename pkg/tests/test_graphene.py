import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import tra.catalog as cat
from tra.errors import InvalidBoundState, InvalidProfile
from tra.graphene import Family, FieldProfile, Scales, dispersion, field_to_scalar, landau_spectrum
from tra.potentials import SymmetryClass, classify
from tra.solver import Branch

PROFILES = [
    FieldProfile(Family.CONSTANT, 1.0, k=0.5),
    FieldProfile(Family.INVERSE_SQUARE, -1.5, k=-2.0),
    FieldProfile(Family.COSH_BARRIER, 5.0, alpha=1.0, k=0.5),
    FieldProfile(Family.EXP_DECAY, 6.0, alpha=1.0, k=4.0),
    FieldProfile(Family.HULTHEN, 2.0, alpha=1.0, k=10.0),
    FieldProfile(Family.SEC_SQUARED, 1.5, alpha=1.0, k=0.5),
    FieldProfile(Family.SINH_SQUARED, 3.0, alpha=1.0, k=10.0),
]
IDS = [p.family.value for p in PROFILES]


def sample_points(profile):
    cfg = field_to_scalar(profile)
    lo, hi = cfg.domain
    lo = max(lo, -3.0)
    hi = min(hi, 3.0)
    x = np.linspace(lo, hi, 41)[1:-1]
    # keep the stencil away from poles of the field, where its truncation error dominates
    B = np.abs(profile.field(x))
    return x[B < 20 * max(np.min(B), abs(profile.B0))], cfg


class TestFieldToScalar:
    def test_cosh_barrier(self):
        q, a, B0 = 0.7, 1.3, 2.0
        prof = FieldProfile(Family.COSH_BARRIER, B0, alpha=a, scales=Scales(charge=q))
        x = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(field_to_scalar(prof).S(x), q * B0 / a * np.tanh(a * x), rtol=1e-14)

    def test_exp_decay(self):
        q, a, B0 = 0.7, 1.3, 2.0
        prof = FieldProfile(Family.EXP_DECAY, B0, alpha=a, scales=Scales(charge=q))
        x = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(field_to_scalar(prof).S(x), -q * B0 / a * np.exp(-a * x), rtol=1e-14)

    def test_hulthen(self):
        prof = FieldProfile(Family.HULTHEN, 2.0, alpha=1.5)
        x = np.linspace(0.1, 4, 13)
        S0 = prof.amplitude()
        np.testing.assert_allclose(field_to_scalar(prof).S(x), S0 / np.expm1(1.5 * x), rtol=1e-14)

    @pytest.mark.parametrize("profile", PROFILES, ids=IDS)
    def test_antiderivative(self, profile):
        x, cfg = sample_points(profile)
        h = 1e-3
        S = cfg.S
        dS = (-S(x + 2 * h) + 8 * S(x + h) - 8 * S(x - h) + S(x - 2 * h)) / (12 * h)
        B = profile.scales.charge * profile.field(x)
        assert np.max(np.abs(dS - B) / np.abs(B)) < 1e-8

    @pytest.mark.parametrize("profile", PROFILES, ids=IDS)
    def test_scalar_only(self, profile):
        cfg = field_to_scalar(profile)
        assert cfg.m == profile.k
        assert classify(cfg) is SymmetryClass.SCALAR_ONLY

    def test_unknown_family(self):
        with pytest.raises(InvalidProfile):
            FieldProfile("gaussian", 1.0)
        with pytest.raises(InvalidProfile):
            field_to_scalar("not a profile")

    def test_positive_rate_required(self):
        with pytest.raises(InvalidProfile):
            FieldProfile(Family.EXP_DECAY, 1.0, alpha=-1.0)


class TestLandau:
    @settings(max_examples=20, deadline=None)
    @given(k=st.floats(-5, 5), n=st.integers(0, 4), hbar=st.floats(0.1, 3), vF=st.floats(0.1, 3))
    def test_vanishing_field(self, k, n, hbar, vF):
        prof = FieldProfile(Family.COSH_BARRIER, 0.0, k=k, scales=Scales(hbar=hbar, v_F=vF))
        E = landau_spectrum(prof, n)
        assert E * E == pytest.approx((hbar * vF * k) ** 2, rel=1e-14, abs=1e-300)

    @pytest.mark.parametrize("profile", PROFILES, ids=IDS)
    def test_unit_scales_equal_catalog(self, profile):
        e = cat.get(profile.entry_id())
        for br in e.branches:
            n = e.first(br)
            assert landau_spectrum(profile, n, br) == cat.spectrum(profile.entry_id(), profile.entry_params(), n, br)

    def test_scales_multiply(self):
        prof = PROFILES[2]
        scaled = FieldProfile(prof.family, prof.B0, prof.alpha, prof.k, Scales(hbar=2.0, v_F=3.0))
        assert landau_spectrum(scaled, 1) == pytest.approx(6.0 * landau_spectrum(prof, 1), rel=1e-14)

    def test_exp_decay_beyond_bound_count(self):
        prof = PROFILES[3]
        count = cat.level_count(prof.entry_id(), prof.entry_params())
        with pytest.raises(InvalidBoundState):
            landau_spectrum(prof, count)

    def test_cosh_barrier_against_oracle(self):
        prof = PROFILES[2]
        e = cat.get(prof.entry_id())
        ref = e.oracle(prof.entry_params(), Branch.POSITIVE).run(Branch.POSITIVE)
        got = [landau_spectrum(prof, n) for n in range(3)]
        np.testing.assert_allclose(got, ref.values()[:3], rtol=1e-4)

    def test_dispersion_skips_unbound(self):
        prof = PROFILES[3]
        rows = dispersion(prof, [3.0, 4.0, 5.0], n_max=6)
        assert {r[0] for r in rows} == {3.0, 4.0, 5.0}
        for k in (3.0, 4.0, 5.0):
            p = FieldProfile(prof.family, prof.B0, prof.alpha, k)
            count = cat.level_count(p.entry_id(), p.entry_params())
            assert sum(1 for r in rows if r[0] == k and r[2] == "positive") == min(count, 7)
