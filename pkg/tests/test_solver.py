import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import tra.catalog as cat
from tra import solver
from tra.catalog._dirac import _sin_window
from tra.errors import GridError, InvalidBoundState, NoRoot, RecursionBreakdown
from tra.jmatrix import make_bands
from tra.solver import (Branch, ImplicitFormula, RecursionSeed, eigenvalue_scan, fd_schrodinger_oracle,
                        implicit_solve, minor_determinant, recursion_run)

SIN = {"m": 1.0, "V0": 0.5, "kappa": 1.5}


@pytest.fixture(scope="module")
def sin_bands():
    return make_bands(*cat.tra_for("spin_sinusoidal", SIN))


class _Bands:
    """Constant bands with a hole in the off-diagonal."""

    def arrays(self, eps, N):
        d = np.full(N + 1, 2.0 - eps)
        c = np.ones(N + 1)
        c[2] = 0.0
        return d, c


class TestRecursion:
    def test_seed(self, sin_bands):
        r = recursion_run(sin_bands, 1.3, 10)
        assert r[0] == 1.0
        assert r[1] == pytest.approx(-sin_bands.d(0, 1.3) / sin_bands.c(0, 1.3), rel=1e-14)

    def test_seed_is_fixed(self):
        with pytest.raises(ValueError):
            RecursionSeed(0.0, 2.0)

    def test_breakdown(self):
        with pytest.raises(RecursionBreakdown):
            recursion_run(_Bands(), 0.5, 6)

    def test_tail_minimal_at_eigenvalue(self, sin_bands):
        e0 = cat.spectrum("spin_sinusoidal", SIN, 0)
        es = e0 + np.linspace(-0.05, 0.05, 11)
        tails = [abs(recursion_run(sin_bands, e, 14)[14]) for e in es]
        assert int(np.argmin(tails)) == 5
        assert tails[5] < 1e-5 * min(tails[4], tails[6])

    @pytest.mark.parametrize("eps,N", [(1.21, 7), (1.7, 8), (2.4, 9), (3.3, 10), (5.0, 7), (7.7, 8),
                                       (9.1, 9), (11.0, 10), (13.5, 11), (17.2, 12)])
    def test_matches_minors(self, sin_bands, eps, N):
        # f_N = (-1)^N D_{N-1} / (c_0 ... c_{N-1})
        f = recursion_run(sin_bands, eps, N)[N]
        logdet, sign, _ = minor_determinant(sin_bands, eps, N - 1)
        c = sin_bands.arrays(eps, N)[1]
        assert f == pytest.approx((-1) ** N * sign * math.exp(logdet) / np.prod(c[:N]), rel=1e-9)

    def test_rescaling_keeps_values(self, sin_bands):
        a = recursion_run(sin_bands, 2.0, 60, rescale_every=4).values()
        b = recursion_run(sin_bands, 2.0, 60, rescale_every=1000).values()
        np.testing.assert_allclose(a, b, rtol=1e-10)


class TestScan:
    def test_free_case_exact(self):
        m, kappa = 1.0, 1.5
        bands = make_bands(*cat.tra_for("spin_sinusoidal", {"m": m, "V0": 0.0, "kappa": kappa}))
        want = np.sqrt(m * m + kappa ** 2 * (np.arange(4) + 1) ** 2)
        pos = eigenvalue_scan(bands, (0.5, 9.0), branch="positive", levels=4, tol=1e-14)
        neg = eigenvalue_scan(bands, (-9.0, -1.05), branch="negative", levels=4, tol=1e-14)
        np.testing.assert_allclose(pos.values(), want, rtol=1e-13)
        np.testing.assert_allclose(neg.values(), -want, rtol=1e-13)

    def test_empty_window(self, sin_bands):
        assert len(eigenvalue_scan(sin_bands, (0.0, 0.9), branch="positive")) == 0

    def test_window_over_singularity(self, sin_bands):
        with pytest.raises(GridError):
            eigenvalue_scan(sin_bands, (-2.0, 2.0))

    def test_n_convergence(self, sin_bands):
        sp = eigenvalue_scan(sin_bands, _sin_window(SIN, Branch.POSITIVE, 9), branch="positive", levels=10,
                             N=20, n_max=40)
        assert len(sp) == 10
        assert all(e.N_used <= 40 and e.delta < 1e-6 for e in sp)

    def test_step_independence(self, sin_bands):
        w = _sin_window(SIN, Branch.POSITIVE, 5)
        a = eigenvalue_scan(sin_bands, w, branch="positive", levels=6)
        b = eigenvalue_scan(sin_bands, w, branch="positive", levels=6, step=(w[1] - w[0]) / 4000)
        np.testing.assert_allclose(a.values(), b.values(), atol=1e-8)

    @pytest.mark.parametrize("window", [(-0.999, 12.0), (-12.0, -1.001)])
    def test_sturm_count_monotone(self, sin_bands, window):
        count = solver._count_fn(sin_bands, 30)
        es = np.linspace(*window, 1500)
        c = np.array([count(e) for e in es])
        assert np.all(np.diff(c) >= 0)
        # every root of the converged spectrum inside the window shows up as a count step
        roots = eigenvalue_scan(sin_bands, window).values()
        assert c[-1] - c[0] >= len(roots) > 0

    def test_scan_agrees_with_oracle(self, sin_bands):
        e = cat.get("spin_sinusoidal")
        ref = e.oracle(SIN, Branch.POSITIVE).run(Branch.POSITIVE)
        got = [cat.spectrum("spin_sinusoidal", SIN, n) for n in range(3)]
        np.testing.assert_allclose(got, ref.values()[:3], rtol=1e-4)


class TestImplicit:
    def test_free_pseudospin(self):
        m = 1.0
        f = ImplicitFormula(lambda e, n: e * e - m * m, name="free")
        assert implicit_solve(f, 0, (0.5, 2.0)) == pytest.approx(m, abs=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(V0=st.floats(0.05, 3.0), n=st.integers(0, 6))
    def test_massless_closed_form(self, V0, n):
        f = ImplicitFormula(lambda e, k: e * e - 4 * math.sqrt(2 * e * V0) * (k + 0.75))
        want = (4 * math.sqrt(2 * V0) * (n + 0.75)) ** (2 / 3)
        assert implicit_solve(f, n, (1e-9, 10 * want)) == pytest.approx(want, rel=1e-10)

    def test_no_root(self):
        with pytest.raises(NoRoot):
            implicit_solve(ImplicitFormula(lambda e, n: e * e + 1), 0, (-1.0, 1.0))

    def test_constraint(self):
        f = ImplicitFormula(lambda e, n: e - 2.0, (("eps below one", lambda e, n: e < 1),))
        with pytest.raises(InvalidBoundState, match="eps below one"):
            implicit_solve(f, 0, (0.0, 3.0))


class TestOracle:
    def test_harmonic(self):
        om = 1.3
        sp = fd_schrodinger_oracle(lambda x, e: 0.5 * om * om * x * x, lambda e: e, (-7, 7), (0.1, 3.5),
                                   n_points=4000)
        np.testing.assert_allclose(sp.values(), om * (np.arange(3) + 0.5), atol=1e-6)

    def test_morse_reduction(self):
        e = cat.get("graphene_morse")
        p = e.defaults
        ref = e.oracle(p, Branch.POSITIVE).run(Branch.POSITIVE)
        got = [cat.spectrum("graphene_morse", p, n) for n in range(3)]
        np.testing.assert_allclose(got, ref.values()[:3], rtol=1e-4)
