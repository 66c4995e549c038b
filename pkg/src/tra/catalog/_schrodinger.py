"""Plain Schrodinger wells -psi''/2 + V psi = E psi; the targets of the reduce() pathway.

For these entries ``eps`` is the Schrodinger energy E itself.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..basis import BasisSpec, CoordinateMap, MapKind
from ..errors import InvalidParameter, NoRoot
from ..jmatrix import WaveOperator, linearity, make_bands
from ..potentials import EffectiveSchrodinger, Potential, constant, family, power, quadratic
from ..solver import Branch, eigenvalue_scan
from ._core import CatalogEntry, Level, OracleSetup, register, require
from ._dirac import null_coefficients
from ._forms import laguerre_wave, series_wave, shifted_exp_wave, tanh_wave

HALF = (0.0, math.inf)
LINE = (-math.inf, math.inf)


def plain(V: Potential, domain) -> EffectiveSchrodinger:
    zero = lambda x: 0.0 * np.asarray(x, dtype=float)
    return EffectiveSchrodinger(V, zero, lambda e: 0.0, lambda e: e, "upper", "+", None, domain)


def _op(V, domain):
    return WaveOperator.schrodinger(plain(V, domain))


def _oracle(V, x_domain, rng, n_points=4000, tol=1e-5):
    return OracleSetup(lambda x, e: V(x), lambda e: e, x_domain, rng, n_points, eps_dependent=False, tol=tol)


def _level(n, E, derived):
    return Level(n, float(E), Branch.POSITIVE, derived)


def _L(p):
    """Effective angular index: L(L+1) = l(l+1) + 2B."""
    val = (p["l"] + 0.5) ** 2 + 2 * p["B"]
    require(val > 0, "(l + 1/2)^2 + 2B must be positive", "(l+1/2)^2 + 2B > 0")
    return math.sqrt(val) - 0.5


# --- Coulomb plus inverse square on x > 0 -------------------------------------------

def _coul_V(p):
    return Potential.of(power(p["A"], -1.0), power(p["B"] + p["l"] * (p["l"] + 1) / 2, -2.0))


def _coul_solve(p, n, branch):
    require(p["A"] < 0, "the Coulomb strength A must be negative for bound states", "A < 0")
    L = _L(p)
    E = -0.5 * (p["A"] / (n + L + 1)) ** 2
    return _level(n, E, {"L": L, "nu": 2 * L, "k": -p["A"] / (n + L + 1)})


def _coul_upper(p, lvl):
    L, k = lvl.derived["L"], lvl.derived["k"]
    return lambda x: laguerre_wave(2 * k * np.asarray(x, dtype=float), L + 1, 2 * L + 1, lvl.n)


def _coul_tra(p):
    L = _L(p)
    return _op(_coul_V(p), HALF), BasisSpec.laguerre(CoordinateMap(MapKind.LINEAR, 1.0), 2 * L + 1)


def _coul_oracle(p, branch):
    E = [_coul_solve(p, n, branch).eps for n in range(4)]
    box = 6.0 * (4 + _L(p)) ** 2 / abs(p["A"])
    return _oracle(_coul_V(p), (0.0, box), (1.5 * E[0], 0.5 * (E[2] + E[3])), n_points=8000)


register(CatalogEntry(
    id="schr_coulomb", symmetry=None, params=("A", "B", "l"), defaults={"A": -1.0, "B": 0.3, "l": 1.0},
    description="Coulomb plus inverse square V = A/x + (B + l(l+1)/2)/x^2 on x > 0",
    solve=_coul_solve, upper=_coul_upper, oracle=_coul_oracle, tra=_coul_tra,
    closed_form=lambda p, n, b: -0.5 * (p["A"] / (n + _L(p) + 1)) ** 2, frame="schrodinger"))


# --- oscillator plus inverse square on x > 0 --------------------------------------------

def _osc_V(p):
    return Potential.of(quadratic(0.5 * p["lam"] ** 4), power(p["B"] + p["l"] * (p["l"] + 1) / 2, -2.0))


def _osc_solve(p, n, branch):
    require(p["lam"] > 0, "lam must be positive", "lam > 0")
    L = _L(p)
    return _level(n, p["lam"] ** 2 * (2 * n + L + 1.5), {"L": L, "nu": 2 * L})


def _osc_upper(p, lvl):
    L, lam = lvl.derived["L"], p["lam"]
    return lambda x: laguerre_wave((lam * np.asarray(x, dtype=float)) ** 2, (L + 1) / 2, L + 0.5, lvl.n)


def _osc_tra(p):
    return _op(_osc_V(p), HALF), BasisSpec.laguerre(CoordinateMap(MapKind.QUADRATIC, p["lam"]), _L(p) + 0.5)


def _osc_oracle(p, branch):
    E = [_osc_solve(p, n, branch).eps for n in range(4)]
    return _oracle(_osc_V(p), (0.0, 9.0 / p["lam"]), (0.5 * E[0], 0.5 * (E[2] + E[3])))


register(CatalogEntry(
    id="schr_oscillator_inverse_square", symmetry=None, params=("lam", "B", "l"),
    defaults={"lam": 1.0, "B": 0.3, "l": 1.0},
    description="oscillator plus inverse square V = lam^4 x^2/2 + (B + l(l+1)/2)/x^2 on x > 0",
    solve=_osc_solve, upper=_osc_upper, oracle=_osc_oracle, tra=_osc_tra,
    closed_form=lambda p, n, b: p["lam"] ** 2 * (2 * n + 2 * _L(p) + 2), frame="schrodinger"))


# --- Morse ---------------------------------------------------------------------------

def _morse_V(p):
    lam = p["lam"]
    return Potential.of(family("exponential", c=lam * lam * p["A"] / 2, lam=lam),
                        family("exponential", c=lam * lam * p["mu"] ** 2 / 8, lam=2 * lam))


def _morse_solve(p, n, branch):
    require(p["mu"] > 0 and p["lam"] > 0, "mu and lam must be positive", "mu > 0, lam > 0")
    t = p["A"] / p["mu"] + n + 0.5
    require(t < 0, f"level n={n} lies above the last bound state", "A/mu + n + 1/2 < 0")
    return _level(n, -0.5 * p["lam"] ** 2 * t * t, {"nu": -2 * t})


def _morse_upper(p, lvl):
    lam, mu, nu = p["lam"], p["mu"], lvl.derived["nu"]
    return lambda x: laguerre_wave(mu * np.exp(-lam * np.asarray(x, dtype=float)), nu / 2, nu, lvl.n)


def _morse_tra(p):
    lam = p["lam"]

    def basis(E):
        return BasisSpec.laguerre(CoordinateMap(MapKind.EXP_DECAY, lam, mu_scale=p["mu"]),
                                  2 * math.sqrt(-2 * E) / lam)
    return _op(_morse_V(p), LINE), basis


def _morse_oracle(p, branch):
    lam = p["lam"]
    lo = -math.log(40.0 / p["mu"]) / lam - 2.0 / lam
    Emin = -p["A"] ** 2 / p["mu"] ** 2 * lam * lam
    return _oracle(_morse_V(p), (lo, 30.0 / lam), (Emin, -1e-6))


register(CatalogEntry(
    id="schr_morse", symmetry=None, params=("A", "mu", "lam"), defaults={"A": -14.0, "mu": 4.0, "lam": 1.0},
    description="Morse well V = (lam^2/2)(A e^{-lam x} + (mu/2)^2 e^{-2 lam x})",
    solve=_morse_solve, upper=_morse_upper, oracle=_morse_oracle, tra=_morse_tra,
    closed_form=lambda p, n, b: -0.5 * p["lam"] ** 2 * (p["A"] / p["mu"] + n + 0.5) ** 2,
    finite=True, frame="schrodinger"))


# --- Hulthen on x > 0 ----------------------------------------------------------------

def _hul_V(p):
    return Potential.of(family("hulthen2", c=p["C"], lam=p["lam"]), family("hulthen", c=p["A"], lam=p["lam"]))


def _hul_nu(p):
    val = 1 + 8 * p["C"] / p["lam"] ** 2
    require(val >= 0, "1 + 8C/lam^2 must be non-negative", "nu real")
    return math.sqrt(val)


def _hul_solve(p, n, branch):
    lam = p["lam"]
    nu = _hul_nu(p)
    N = n + (nu + 1) / 2
    c = 2 * (p["A"] - p["C"]) / lam ** 2
    require(N * N < -c, f"level n={n} lies above the last bound state", "N^2 < 2(C - A)/lam^2")
    E = -(lam * lam / 8) * (N + c / N) ** 2
    return _level(n, E, {"nu": nu, "mu": -(N + c / N), "N": N})


def _hul_upper(p, lvl):
    lam, mu, nu = p["lam"], lvl.derived["mu"], lvl.derived["nu"]
    return lambda x: shifted_exp_wave(lam, x, mu / 2, (nu + 1) / 2,
                                 mu, nu, lvl.n)


def _hul_tra(p):
    lam, nu = p["lam"], _hul_nu(p)

    def basis(E):
        return BasisSpec.jacobi(CoordinateMap(MapKind.SHIFTED_EXP, lam), 2 * math.sqrt(-2 * E) / lam, nu)
    return _op(_hul_V(p), HALF), basis


def _hul_oracle(p, branch):
    E0 = _hul_solve(p, 0, branch).eps
    return _oracle(_hul_V(p), (0.0, 30.0 / p["lam"]), (1.5 * E0, -1e-6),
                   n_points=60000, tol=1e-4)  # 1/x^2 core: slower than h^2 convergence


register(CatalogEntry(
    id="schr_hulthen", symmetry=None, params=("A", "C", "lam"), defaults={"A": -8.0, "C": 0.5, "lam": 1.0},
    description="generalized Hulthen well V = C/(e^{lam x} - 1)^2 + A/(e^{lam x} - 1) on x > 0",
    solve=_hul_solve, upper=_hul_upper, oracle=_hul_oracle, tra=_hul_tra,
    closed_form=lambda p, n, b: _hul_solve(p, n, b).eps, finite=True, frame="schrodinger",
    notes="decay exponent mu/2 sits on the (1 - y) side, y = 1 - 2 e^{-lam x}"))


# --- hyperbolic Rosen-Morse --------------------------------------------------------------

def _rm_V(p):
    return Potential.of(family("tanh", c=p["C"], lam=p["lam"]), family("sech2", c=p["A"], lam=p["lam"]))


def _rm_solve(p, n, branch):
    lam, C = p["lam"], p["C"]
    D2 = lam * lam / 4 - 2 * p["A"]
    require(D2 > 0, "lam^2/4 - 2A must be positive", "D^2 > 0")
    g = n + 0.5 - math.sqrt(D2) / lam
    require(g < 0, f"level n={n} lies above the last bound state", "D/lam > n + 1/2")
    require(g * g > abs(C) / lam ** 2, f"level n={n} is not bound", "g^2 > |C|/lam^2")
    E = -0.5 * lam * lam * (g * g + (C / lam ** 2) ** 2 / (g * g))
    return _level(n, E, {"g": g, "D": math.sqrt(D2), "mu": math.sqrt(2 * (C - E)) / lam,
                         "nu": math.sqrt(-2 * (C + E)) / lam})


def _rm_upper(p, lvl):
    lam, mu, nu = p["lam"], lvl.derived["mu"], lvl.derived["nu"]
    return lambda x: tanh_wave(lam, x, mu / 2, nu / 2, mu, nu, lvl.n)


def _rm_tra(p):
    lam, C = p["lam"], p["C"]

    def basis(E):
        return BasisSpec.jacobi(CoordinateMap(MapKind.TANH, lam), math.sqrt(2 * (C - E)) / lam,
                                math.sqrt(-2 * (C + E)) / lam)
    return _op(_rm_V(p), LINE), basis


def _rm_oracle(p, branch):
    E0 = _rm_solve(p, 0, branch).eps
    return _oracle(_rm_V(p), (-20.0 / p["lam"], 20.0 / p["lam"]), (1.5 * E0, -abs(p["C"]) - 1e-6), n_points=12000)


register(CatalogEntry(
    id="schr_rosen_morse", symmetry=None, params=("A", "C", "lam"), defaults={"A": -6.0, "C": 0.5, "lam": 1.0},
    description="hyperbolic Rosen-Morse well V = C tanh(lam x) + A sech^2(lam x)",
    solve=_rm_solve, upper=_rm_upper, oracle=_rm_oracle, tra=_rm_tra,
    closed_form=lambda p, n, b: _rm_solve(p, n, b).eps, finite=True, frame="schrodinger",
    notes="exponent sqrt(2(C - E))/lam sits on the (1 - tanh) side"))


# --- sinusoidal well on [0, L] -----------------------------------------------------

def _sin_check(p):
    k = p["k"]
    if k != int(k) or k < 0:
        raise InvalidParameter("k must be a non-negative integer")
    if p["L"] <= 0:
        raise InvalidParameter("L must be positive")


def _sin_V(p):
    lam = math.pi / p["L"]
    if p["k"] == 0:
        return constant(p["V0"])
    return family("cosine", c=p["V0"], lam=p["k"] * lam)


def _sin_basis(p):
    return BasisSpec.jacobi(CoordinateMap(MapKind.COSINE, math.pi / p["L"]), 0.5, 0.5)


def _sin_tra(p):
    """Raises NotTridiagonalizable for k >= 2 (cos(k lam x) is a degree-k polynomial in y)."""
    _sin_check(p)
    op, spec = _op(_sin_V(p), (0.0, p["L"])), _sin_basis(p)
    linearity(op, spec)
    return op, spec


@lru_cache(maxsize=32)
def _sin_levels(V0, L, k, count):
    p = {"V0": V0, "L": L, "k": k}
    lam = math.pi / L
    bands = make_bands(*_sin_tra(p))
    hi = abs(V0) + 0.5 * lam * lam * (count + 1) ** 2 + 1.0
    sp = eigenvalue_scan(bands, (-abs(V0) - 1e-9, hi), branch=Branch.POSITIVE, levels=count)
    return tuple(e.eps for e in sp.branch(Branch.POSITIVE))[:count]


def _sin_solve(p, n, branch):
    _sin_check(p)
    lam = math.pi / p["L"]
    if p["k"] == 0:
        return _level(n, p["V0"] + 0.5 * lam * lam * (n + 1) ** 2, {})
    vals = _sin_levels(float(p["V0"]), float(p["L"]), int(p["k"]), max(n + 1, 4))
    if len(vals) <= n:
        raise NoRoot(f"sinusoidal well: level n={n} not found")
    return _level(n, vals[n], {})


def _sin_upper(p, lvl):
    lam = math.pi / p["L"]
    if p["k"] == 0:
        return lambda x: np.sin((lvl.n + 1) * lam * np.asarray(x, dtype=float))
    bands = make_bands(*_sin_tra(p))
    return series_wave(_sin_basis(p), null_coefficients(bands, lvl.eps))


def _sin_oracle(p, branch):
    E = [_sin_solve(p, n, branch).eps for n in range(4)]
    return _oracle(_sin_V(p), (0.0, p["L"]), (min(E[0], -abs(p["V0"])) - 1.0, 0.5 * (E[2] + E[3])))


register(CatalogEntry(
    id="schr_sinusoidal", symmetry=None, params=("V0", "L", "k"), defaults={"V0": 2.0, "L": 3.0, "k": 1.0},
    description="sinusoidal well V = V0 cos(k pi x / L) on [0, L]; tridiagonal for k = 0, 1 only",
    solve=_sin_solve, upper=_sin_upper, oracle=_sin_oracle, tra=_sin_tra, frame="schrodinger",
    notes="k = 1 has no closed form; levels come from the tridiagonal scan"))
