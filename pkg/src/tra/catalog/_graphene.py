"""Graphene (Dirac-Weyl) magnetic-barrier entries: scalar-only coupling with mass slot k."""
from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np

from ..errors import TRAError
from ..basis import BasisSpec, CoordinateMap, MapKind
from ..jmatrix import WaveOperator
from ..potentials import Potential, PotentialConfig, SymmetryClass, constant, family, reduce
from ..solver import Branch
from ._core import CatalogEntry, Level, OracleSetup, explicit_level, register, require
from ._forms import hermite_wave, ladder_wave, laguerre_wave, shifted_exp_wave, tanh_wave

BOTH = (Branch.POSITIVE, Branch.NEGATIVE)
log = logging.getLogger(__name__)


def _scalar_config(k, S, domain):
    return PotentialConfig(m=k, S=S, domain=domain)


def _reduced(cfg):
    return reduce(cfg, SymmetryClass.SCALAR_ONLY, "+")


def _weyl_op(cfg):
    return WaveOperator.schrodinger(_reduced(cfg))


def _oracle(cfg, x_domain, top, branch, n_points=4000, bottom=1e-3):
    eff = _reduced(cfg)
    rng = (bottom, top) if Branch(branch) is Branch.POSITIVE else (-top, -bottom)
    return OracleSetup(eff.U, eff.E, x_domain, rng, n_points, eps_dependent=False)


# --- hyperbolic barrier: S = S0 tanh(alpha x) -------------------------------------------

def _tanh_cfg(p):
    return _scalar_config(p["k"], Potential.of(family("tanh", c=p["S0"], lam=p["alpha"])), (-math.inf, math.inf))


def _tanh_s(p):
    return abs(p["S0"] / p["alpha"] - 0.5) - 0.5


def _tanh_solve(p, n, branch):
    k, S0, a = p["k"], p["S0"], p["alpha"]
    require(S0 * (S0 - a) > -a * a / 4, "S0(S0 - alpha) must exceed -alpha^2/4", "S0(S0-alpha) > -alpha^2/4")
    g = _tanh_s(p) - n
    require(g > 0, f"level n={n} lies above the last bound state", "n < s")
    require(g * g > abs(k * S0) / a ** 2, f"level n={n} is not bound (g^2 <= |k S0|/alpha^2)", "g^2 > |k S0|/alpha^2")
    eps2 = k * k + S0 * S0 - a * a * (g * g + (k * S0 / a ** 2) ** 2 / g ** 2)
    lvl = explicit_level(eps2, n, branch)
    pe = math.sqrt(max((k + S0) ** 2 - eps2, 0.0)) / a
    qe = math.sqrt(max((k - S0) ** 2 - eps2, 0.0)) / a
    return Level(n, lvl.eps, lvl.branch, {"g": g, "mu": pe, "nu": qe, "s": _tanh_s(p)})


def _tanh_candidate(p, lvl, swapped):
    a, mu, nu = p["alpha"], lvl.derived["mu"], lvl.derived["nu"]
    if swapped:
        mu, nu = nu, mu
    return lambda x: tanh_wave(a, x, mu / 2, nu / 2, mu, nu, lvl.n)


@lru_cache(maxsize=256)
def _tanh_assignment(k, S0, alpha, n, branch):
    from ..spinor import assemble, dirac_residual, normalize

    p = {"k": k, "S0": S0, "alpha": alpha}
    lvl = _tanh_solve(p, n, branch)
    cfg = _tanh_cfg(p)
    res = []
    for swapped in (False, True):
        try:
            f = normalize(assemble(_tanh_candidate(p, lvl, swapped), cfg, lvl.eps, frame="weyl"))
            res.append(dirac_residual(f, cfg))
        except TRAError:
            res.append(math.inf)
    swapped = res[1] < res[0]
    log.info("graphene_tanh n=%d %s: exponent assignment %s (residuals %.2e direct, %.2e swapped)",
             n, Branch(branch).value, "swapped" if swapped else "direct", res[0], res[1])
    return swapped


def _tanh_upper(p, lvl):
    """Upper component with whichever exponent assignment has the smaller Dirac residual."""
    swapped = _tanh_assignment(p["k"], p["S0"], p["alpha"], lvl.n, lvl.branch)
    return _tanh_candidate(p, lvl, swapped)


def _tanh_tra(p):
    cfg = _tanh_cfg(p)
    k, S0, a = p["k"], p["S0"], p["alpha"]

    def basis(eps):
        mu = math.sqrt((k + S0) ** 2 - eps * eps) / a
        nu = math.sqrt((k - S0) ** 2 - eps * eps) / a
        return BasisSpec.jacobi(CoordinateMap(MapKind.TANH, a), mu, nu)
    return _weyl_op(cfg), basis


def _tanh_oracle(p, branch):
    thr = min(abs(p["k"] + p["S0"]), abs(p["k"] - p["S0"]))
    L = 30.0 / p["alpha"]
    return _oracle(_tanh_cfg(p), (-L, L), thr - 1e-6, branch)


register(CatalogEntry(
    id="graphene_tanh", symmetry=SymmetryClass.SCALAR_ONLY, params=("k", "S0", "alpha"),
    defaults={"k": 0.5, "S0": 5.0, "alpha": 1.0},
    description="graphene, hyperbolic magnetic barrier B0/cosh^2(alpha x); S = S0 tanh(alpha x); hyperbolic Rosen-Morse partner",
    solve=_tanh_solve, upper=_tanh_upper, config=_tanh_cfg, oracle=_tanh_oracle, tra=_tanh_tra,
    branches=BOTH, finite=True, frame="weyl",
    notes="both exponent assignments are tried per level; the one with the smaller Dirac residual is used and logged"))


# --- exponential barrier: S = S0 e^{-alpha x} (Morse partner) --------------------------

def _exp_cfg(p):
    return _scalar_config(p["k"], Potential.of(family("exponential", c=p["S0"], lam=p["alpha"])), (-math.inf, math.inf))


def _exp_solve(p, n, branch):
    k, S0, a = p["k"], p["S0"], p["alpha"]
    require(a > 0, "alpha must be positive", "alpha > 0")
    require(S0 != 0, "S0 must be nonzero", "S0 != 0")
    gam = S0 * (2 * k - a) / a ** 2
    mu = abs(2 * S0 / a)
    t = gam / mu + n + 0.5
    require(t < 0, f"level n={n} lies above the last bound state", "gamma/mu + n + 1/2 < 0")
    lvl = explicit_level(k * k - a * a * t * t, n, branch)
    return Level(n, lvl.eps, lvl.branch, {"gamma": gam, "mu": mu, "nu": -2 * t})


def _exp_upper(p, lvl):
    a, mu, nu = p["alpha"], lvl.derived["mu"], lvl.derived["nu"]
    return lambda x: laguerre_wave(mu * np.exp(-a * x), nu / 2, nu, lvl.n)


def _exp_tra(p):
    cfg = _exp_cfg(p)
    k, S0, a = p["k"], p["S0"], p["alpha"]

    def basis(eps):
        nu = 2 * math.sqrt(k * k - eps * eps) / a
        return BasisSpec.laguerre(CoordinateMap(MapKind.EXP_DECAY, a, mu_scale=abs(2 * S0 / a)), nu)
    return _weyl_op(cfg), basis


def _exp_oracle(p, branch):
    a = p["alpha"]
    lo = -math.log(40.0 * max(abs(p["k"]), 1.0) / abs(p["S0"])) / a - 2.0 / a
    return _oracle(_exp_cfg(p), (lo, 30.0 / a), abs(p["k"]) - 1e-6, branch)


register(CatalogEntry(
    id="graphene_morse", symmetry=SymmetryClass.SCALAR_ONLY, params=("k", "S0", "alpha"),
    defaults={"k": 4.0, "S0": -6.0, "alpha": 1.0},
    description="graphene, exponentially decaying magnetic field B0 e^{-alpha x}; S = S0 e^{-alpha x}; Morse partner",
    solve=_exp_solve, upper=_exp_upper, config=_exp_cfg, oracle=_exp_oracle, tra=_exp_tra,
    branches=BOTH, finite=True, frame="weyl"))


# --- Hulthen barrier: S = S0/(e^{alpha x} - 1) ----------------------------------------

def _hul_cfg(p):
    return _scalar_config(p["k"], Potential.of(family("hulthen", c=p["S0"], lam=p["alpha"])), (0.0, math.inf))


def _hul_params(p):
    k, S0, a = p["k"], p["S0"], p["alpha"]
    nu = abs(2 * S0 / a - 1)
    c = S0 * (2 * k - S0) / a ** 2
    return nu, c


def _hul_solve(p, n, branch):
    k, a = p["k"], p["alpha"]
    nu, c = _hul_params(p)
    N = n + (nu + 1) / 2
    require(N * N < -c, f"level n={n} lies above the last bound state", "N^2 < -2(gamma-omega)/alpha^2")
    t = N + c / N
    lvl = explicit_level(k * k - a * a / 4 * t * t, n, branch)
    return Level(n, lvl.eps, lvl.branch, {"nu": nu, "mu": -t, "N": N})


def _hul_upper(p, lvl):
    a, mu, nu = p["alpha"], lvl.derived["mu"], lvl.derived["nu"]
    # z^{mu/2} (1 - z)^{(nu+1)/2} P_n^{(mu,nu)}(1 - 2z), z = e^{-alpha x}
    return lambda x: shifted_exp_wave(a, x, mu / 2, (nu + 1) / 2, mu, nu, lvl.n)


def _hul_tra(p):
    cfg = _hul_cfg(p)
    k, a = p["k"], p["alpha"]
    nu, _ = _hul_params(p)

    def basis(eps):
        mu = 2 * math.sqrt(k * k - eps * eps) / a
        return BasisSpec.jacobi(CoordinateMap(MapKind.SHIFTED_EXP, a), mu, nu)
    return _weyl_op(cfg), basis


def _hul_oracle(p, branch):
    return _oracle(_hul_cfg(p), (0.0, 40.0 / p["alpha"]), abs(p["k"]) - 1e-6, branch, n_points=6000)


register(CatalogEntry(
    id="graphene_hulthen", symmetry=SymmetryClass.SCALAR_ONLY, params=("k", "S0", "alpha"),
    defaults={"k": 10.0, "S0": -2.0, "alpha": 1.0},
    description="graphene, Hulthen magnetic barrier B0 e^{alpha x}/(e^{alpha x}-1)^2; S = S0/(e^{alpha x}-1); generalized Hulthen partner",
    solve=_hul_solve, upper=_hul_upper, config=_hul_cfg, oracle=_hul_oracle, tra=_hul_tra,
    branches=BOTH, finite=True, frame="weyl",
    notes="Jacobi parameter mu_n = -(N + c/N) pairs with the exponent mu_n/2 on e^{-alpha x}"))


# --- constant field: S = gamma x -----------------------------------------------------

def _const_cfg(p):
    return _scalar_config(p["k"], Potential.of(family("power", c=p["gamma"], p=1)), (-math.inf, math.inf))


def _const_solve(p, n, branch):
    g = p["gamma"]
    require(g != 0, "gamma must be nonzero", "gamma != 0")
    eps2 = abs(g) * (2 * n + 1) + g
    require(eps2 > 0, "zero mode: eps = 0 has no Weyl-frame partner", "eps != 0")
    return explicit_level(eps2, n, branch, {"omega": abs(g)})


def _const_closed(p, n, branch):
    g = p["gamma"]
    val = math.sqrt(2 * g + abs(g) * (2 * n + 1))
    return val if Branch(branch) is Branch.POSITIVE else -val


def _const_upper(p, lvl):
    g, k = p["gamma"], p["k"]
    r = math.sqrt(abs(g))
    return lambda x: hermite_wave(r * (x + k / g), lvl.n)


def _const_tra(p, parity="odd"):
    """Half-line problem about the well centre; ``parity`` picks nu = +1/2 (odd) or -1/2 (even)."""
    g, k = p["gamma"], p["k"]
    cfg = _scalar_config(k, Potential.of(family("power", c=g, p=1)), (-k / g, math.inf))
    nu = 0.5 if parity == "odd" else -0.5
    return _weyl_op(cfg), BasisSpec.laguerre(CoordinateMap(MapKind.QUADRATIC, math.sqrt(abs(g)), shift=-k / g), nu)


def _const_oracle(p, branch):
    g, k = p["gamma"], p["k"]
    c, w = -k / g, 12.0 / math.sqrt(abs(g))
    top = math.sqrt(abs(g) * 7 + g) - 0.05 * math.sqrt(abs(g))
    return _oracle(_const_cfg(p), (c - w, c + w), top, branch)


register(CatalogEntry(
    id="graphene_constant", symmetry=SymmetryClass.SCALAR_ONLY, params=("k", "gamma"),
    defaults={"k": 0.5, "gamma": 1.0},
    description="graphene, uniform magnetic field B0; S = gamma x with gamma = e B0/(c hbar); shifted oscillator partner",
    solve=_const_solve, upper=_const_upper, config=_const_cfg, oracle=_const_oracle, tra=_const_tra,
    closed_form=_const_closed, branches=BOTH, frame="weyl", tra_parity=True,
    notes="derived eps^2 = |gamma|(2n+1) + gamma; the tabulated 2 gamma + omega(2n+1) is reported as a discrepancy"))


# --- 1/x^2 field: S = gamma/x ---------------------------------------------------------

def _inv_cfg(p):
    return _scalar_config(p["k"], Potential.of(family("power", c=p["gamma"], p=-1)), (0.0, math.inf))


def _inv_solve(p, n, branch):
    k, g = p["k"], p["gamma"]
    require(k * g < 0, "k gamma must be negative for bound states", "k gamma < 0")
    require(g > 0.5, "gamma must exceed 1/2", "gamma > 1/2")
    eps2 = k * k * (1 - g * g / (n + g) ** 2)
    require(eps2 > 0, "zero mode: eps = 0 has no Weyl-frame partner", "eps != 0")
    return explicit_level(eps2, n, branch, {"kappa": -k * g / (n + g), "nu": 2 * (g - 1)})


def _inv_upper(p, lvl):
    g, kap = p["gamma"], lvl.derived["kappa"]
    return lambda x: laguerre_wave(2 * kap * x, g, 2 * g - 1, lvl.n)


def _inv_tra(p):
    g = p["gamma"]
    return _weyl_op(_inv_cfg(p)), BasisSpec.laguerre(CoordinateMap(MapKind.LINEAR, 1.0), 2 * g - 1)


def _inv_oracle(p, branch):
    k, g = p["k"], p["gamma"]
    top = abs(k) * math.sqrt(1 - g * g / (3.5 + g) ** 2)
    return OracleSetup(_reduced(_inv_cfg(p)).U, _reduced(_inv_cfg(p)).E, (0.0, 80.0 / abs(k)),
                       (0.05 * abs(k), top) if Branch(branch) is Branch.POSITIVE else (-top, -0.05 * abs(k)),
                       8000, eps_dependent=False)


register(CatalogEntry(
    id="graphene_inverse_square", symmetry=SymmetryClass.SCALAR_ONLY, params=("k", "gamma"),
    defaults={"k": -2.0, "gamma": 1.5},
    description="graphene, magnetic field B0/x^2; S = gamma/x with gamma = -e B0/(c hbar); Coulomb partner",
    solve=_inv_solve, upper=_inv_upper, config=_inv_cfg, oracle=_inv_oracle, tra=_inv_tra,
    branches=BOTH, frame="weyl", first_level=1, notes="n = 0 is the zero mode; finite-energy levels start at n = 1"))


# --- sec^2 field: S = S0 tan(lambda x) -------------------------------------------------

def _sec_cfg(p):
    lam = p["lam"]
    h = math.pi / (2 * lam)
    return _scalar_config(p["k"], Potential.of(family("tan", c=p["S0"], lam=lam)), (-h, h))


def _sec_s(p):
    lam, S0 = p["lam"], p["S0"]
    return abs(S0 / lam + 0.5) + 0.5


def _sec_solve(p, n, branch):
    k, S0, lam = p["k"], p["S0"], p["lam"]
    require(S0 * (S0 + lam) > -lam * lam / 4, "S0(S0 + lambda) must exceed -lambda^2/4", "S0(S0+lambda) > -lambda^2/4")
    t = n + _sec_s(p)
    eps2 = k * k - S0 * S0 + lam * lam * t * t - (k * S0) ** 2 / (lam * lam * t * t)
    return explicit_level(eps2, n, branch, {"s": _sec_s(p), "D": abs(S0 + lam / 2)})


def _sec_closed(p, n, branch):
    k, S0, lam = p["k"], p["S0"], p["lam"]
    D = math.sqrt(S0 * (S0 + lam) + lam * lam / 4)
    t = n + 0.5 - D / lam
    val2 = k * k - S0 * S0 + lam * lam * t * t - (k * S0) ** 2 / (lam * lam * t * t)
    val = math.sqrt(val2) if val2 > 0 else float("nan")
    return val if Branch(branch) is Branch.POSITIVE else -val


def _sec_upper(p, lvl):
    return ladder_wave("tan", p["lam"], lvl.derived["s"], p["k"] * p["S0"], lvl.n)


def _sec_oracle(p, branch):
    lam = p["lam"]
    h = math.pi / (2 * lam)
    t = 3 + _sec_s(p) - 0.5
    k, S0 = p["k"], p["S0"]
    top = math.sqrt(k * k - S0 * S0 + lam * lam * t * t - (k * S0) ** 2 / (lam * lam * t * t))
    return _oracle(_sec_cfg(p), (-h, h), top, branch)


register(CatalogEntry(
    id="graphene_sec2", symmetry=SymmetryClass.SCALAR_ONLY, params=("k", "S0", "lam"),
    defaults={"k": 0.5, "S0": 1.5, "lam": 1.0},
    description="graphene, magnetic field B0/cos^2(lambda x); S = S0 tan(lambda x); trigonometric Rosen-Morse partner",
    solve=_sec_solve, upper=_sec_upper, config=_sec_cfg, oracle=_sec_oracle, closed_form=_sec_closed,
    branches=BOTH, frame="weyl",
    notes="derived levels use n + 1/2 + D/lambda; no Table-1 map tridiagonalises this case"))


# --- sinh^-2 field: S = S0 coth(lambda x) ------------------------------------------------

def _sinh_cfg(p):
    return _scalar_config(p["k"], Potential.of(family("coth", c=p["S0"], lam=p["lam"])), (0.0, math.inf))


def _sinh_s(p):
    return abs(p["S0"] / p["lam"] - 0.5) + 0.5


def _sinh_solve(p, n, branch):
    k, S0, lam = p["k"], p["S0"], p["lam"]
    require(S0 * (S0 - lam) > -lam * lam / 4, "S0(S0 - lambda) must exceed -lambda^2/4", "S0(S0-lambda) > -lambda^2/4")
    require(k * S0 < 0, "k S0 must be negative for bound states", "k S0 < 0")
    t = n + _sinh_s(p)
    require(t * t < abs(k * S0) / lam ** 2, f"level n={n} lies above the last bound state", "(n + s)^2 < |k S0|/lambda^2")
    eps2 = k * k + S0 * S0 - lam * lam * t * t - (k * S0) ** 2 / (lam * lam * t * t)
    return explicit_level(eps2, n, branch, {"s": _sinh_s(p), "D": abs(S0 - lam / 2)})


def _sinh_closed(p, n, branch):
    k, S0, lam = p["k"], p["S0"], p["lam"]
    D = math.sqrt(S0 * (S0 - lam) + lam * lam / 4)
    t = n + 0.5 - D / lam
    val2 = k * k - S0 * S0 - lam * lam * t * t - (k * S0) ** 2 / (lam * lam * t * t)
    val = math.sqrt(val2) if val2 > 0 else float("nan")
    return val if Branch(branch) is Branch.POSITIVE else -val


def _sinh_upper(p, lvl):
    return ladder_wave("coth", p["lam"], lvl.derived["s"], p["k"] * p["S0"], lvl.n)


def _sinh_oracle(p, branch):
    return _oracle(_sinh_cfg(p), (0.0, 40.0 / p["lam"]), abs(p["k"] + p["S0"]) - 1e-6, branch, n_points=6000)


register(CatalogEntry(
    id="graphene_sinh2", symmetry=SymmetryClass.SCALAR_ONLY, params=("k", "S0", "lam"),
    defaults={"k": 10.0, "S0": -3.0, "lam": 1.0},
    description="graphene, magnetic field B0/sinh^2(lambda x); S = S0 coth(lambda x); hyperbolic Eckart partner",
    solve=_sinh_solve, upper=_sinh_upper, config=_sinh_cfg, oracle=_sinh_oracle, closed_form=_sinh_closed,
    branches=BOTH, finite=True, frame="weyl",
    notes="derived levels use k^2 + S0^2 and n + 1/2 + D/lambda; no Table-1 map tridiagonalises this case"))
