"""Tridiagonal matrix of the wave operator in a Laguerre or Jacobi basis.

The wave operator is written generically as

    J_nm(eps) = pref(eps) [ <phi_n'|phi_m'> + <phi_n| M0 + c1(eps) M1 + c2(eps) |phi_m> ]

which covers the Dirac operator after kinetic balance (pref = eta/(eps+m),
M0 = W^2 - W', M1 = V + S, c1 = (eps+m)/eta, c2 = (eps+m)(m-eps)/eta) and any
reduced Schrodinger problem (pref = 1/2, M = 2(U - E)). Changing to y turns the
bracket into kappa^2 [ D_n + G(y) ] sandwiched between orthonormal polynomials,
where D_n is the polynomial eigenvalue. When G(y) = rho*y + sigma the matrix is
tridiagonal with bands given by the polynomial recurrence.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from . import orthopoly as op
from .basis import BasisSpec, _breakpoints
from .errors import (IntegrationError, LinearityCheckFailed, NotTridiagonalizable,
                     SingularPrefactor)
from .potentials import EffectiveSchrodinger, PotentialConfig

LINEARITY_TOL = 1e-9
N_PROBE = 64


@dataclass(frozen=True)
class WaveOperator:
    """pref(eps) [ -d^2/dx^2 + M0(x) + c1(eps) M1(x) + c2(eps) ] in weak form."""

    m0: Callable
    m1: Callable
    c1: Callable
    c2: Callable
    pref: Callable
    kind: str = "dirac"
    config: PotentialConfig | None = None
    eta: float = 1.0
    singular_eps: float | None = None

    @classmethod
    def dirac(cls, config: PotentialConfig, eta: float = 1.0):
        m = config.m
        S, V, W = config.S, config.V, config.W
        return cls(
            m0=lambda x: W(x) ** 2 - W.derivative(x),
            m1=lambda x: V(x) + S(x),
            c1=lambda e: (e + m) / eta,
            c2=lambda e: (e + m) * (m - e) / eta,
            pref=lambda e: eta / (e + m),
            kind="dirac", config=config, eta=eta, singular_eps=-m)

    @classmethod
    def schrodinger(cls, eff: EffectiveSchrodinger):
        return cls(
            m0=lambda x: 2 * eff.u0(x),
            m1=lambda x: 2 * eff.u1(x),
            c1=eff.c1,
            c2=lambda e: -2 * eff.E(e),
            pref=lambda e: 0.5,
            kind="schrodinger")

    def prefactor(self, eps):
        if self.singular_eps is not None and eps == self.singular_eps:
            raise SingularPrefactor(f"wave-operator prefactor is singular at eps = {eps}")
        return self.pref(eps)

    def M(self, x, eps):
        return self.m0(x) + self.c1(eps) * self.m1(x) + self.c2(eps)


@dataclass(frozen=True)
class LinearityResult:
    """G(y) = rho*y + sigma at one energy, plus the per-component fit.

    ``parts`` holds (rho_k, sigma_k) for the eps-independent piece (k=0), the
    M1 piece (k=1) and the constant piece (k=2); rho(eps) = rho_0 + c1 rho_1 + c2 rho_2.
    """

    rho: float
    sigma: float
    residual_bound: float
    parts: tuple = ()
    operator: WaveOperator | None = None

    def at(self, eps):
        if not self.parts or self.operator is None:
            return self.rho, self.sigma
        (r0, s0), (r1, s1), (r2, s2) = self.parts
        c1, c2 = self.operator.c1(eps), self.operator.c2(eps)
        return r0 + c1 * r1 + c2 * r2, s0 + c1 * s1 + c2 * s2


def probe_points(spec: BasisSpec, npts=N_PROBE):
    if spec.kind == "laguerre":
        return np.geomspace(1e-2, 30.0, npts)
    k = np.arange(npts)
    return np.cos(np.pi * (k + 0.5) / npts)


def g_components(wave: WaveOperator, spec: BasisSpec, y):
    """G split as (G0, G1, G2) with G = G0 + c1 G1 + c2 G2, sampled at y."""
    Tm0, B, Tm1, T = _g_terms(wave, spec, y)
    return Tm0 + B, Tm1, T


def _g_terms(wave, spec, y):
    kappa, a, b = spec.cmap.shape
    al, be = spec.alpha, spec.beta
    x = spec.cmap.inverse(y)
    if spec.kind == "laguerre":
        T = y ** (1 - 2 * a) * np.exp(-2 * b * y) / kappa ** 2
        B = -al * (al + a - 1) / y + 2 * al * be + a * be - b * al - be * (be - b) * y
    else:
        T = (1 - y) ** (1 - 2 * a) * (1 + y) ** (1 - 2 * b) / kappa ** 2
        B = -(al * (al + a - 1) * (1 + y) / (1 - y) + be * (be + b - 1) * (1 - y) / (1 + y)
              - 2 * al * be - a * be - b * al)
    return T * wave.m0(x), B, T * wave.m1(x), T


_DICT_LAGUERRE = (("y^2", lambda y: y * y), ("1/y", lambda y: 1 / y), ("y^(1/2)", np.sqrt),
                  ("y^(3/2)", lambda y: y ** 1.5), ("y^3", lambda y: y ** 3), ("1/y^2", lambda y: y ** -2),
                  ("log y", np.log))
_DICT_JACOBI = (("y^2", lambda y: y * y), ("1/(1-y)", lambda y: 1 / (1 - y)), ("1/(1+y)", lambda y: 1 / (1 + y)),
                ("y^3", lambda y: y ** 3), ("sqrt(1-y^2)", lambda y: np.sqrt(1 - y * y)))


def _fit_line(y, g):
    A = np.column_stack([y, np.ones_like(y)])
    coef, *_ = np.linalg.lstsq(A, g, rcond=None)
    resid = np.max(np.abs(A @ coef - g))
    return coef, resid


def _offending_term(spec, y, g, scale):
    terms = _DICT_LAGUERRE if spec.kind == "laguerre" else _DICT_JACOBI
    cols = [y, np.ones_like(y)] + [f(y) for _, f in terms]
    A = np.column_stack(cols)
    norms = np.max(np.abs(A), axis=0)
    coef, *_ = np.linalg.lstsq(A / norms, g, rcond=None)
    resid = np.max(np.abs((A / norms) @ coef - g))
    weights = np.abs(coef[2:])
    best = int(np.argmax(weights))
    return terms[best][0], resid, weights[best] / scale


def _check_line(spec, y, g, tol, label, mag=None):
    """``mag`` bounds the size of the pieces summed into g; the tolerance is relative to it."""
    g = np.asarray(g, dtype=float) * np.ones_like(y)
    if not np.all(np.isfinite(g)):
        raise LinearityCheckFailed(f"G ({label}) is not finite on the probe grid")
    scale = 1.0 + max(np.max(np.abs(g)), 0.0 if mag is None else float(np.max(mag)))
    coef, resid = _fit_line(y, g)
    if resid > tol * scale:
        term, aug_resid, weight = _offending_term(spec, y, g, scale)
        if aug_resid < 1e-3 * resid and weight > 1e-8:
            raise NotTridiagonalizable(
                f"G(y) contains a {term} term ({label}); the J-matrix is not tridiagonal", term=term)
        raise LinearityCheckFailed(f"G(y) deviates from a line by {resid:.3e} ({label})")
    return (float(coef[0]), float(coef[1])), resid / scale


def linearity(wave_or_config, spec: BasisSpec, eps: float | None = None, tol=LINEARITY_TOL) -> LinearityResult:
    """Fit G(y) = rho*y + sigma on a 64-point probe grid and verify the fit.

    Each of the three eps-independent pieces of G is fitted separately so the
    result can be re-evaluated at any eps through :meth:`LinearityResult.at`.
    Bases tuned to one energy (exponential and tanh maps) only linearise the
    combined G; with ``eps`` given the combination is fitted instead.
    """
    wave = _as_operator(wave_or_config, spec)
    y = probe_points(spec)
    with np.errstate(all="ignore"):
        Tm0, B, Tm1, T = _g_terms(wave, spec, y)
    comps = (Tm0 + B, Tm1, T)
    mags = (np.abs(Tm0) + np.abs(B), None, None)
    try:
        fits = [_check_line(spec, y, g, tol, f"component {k}", mg) for k, (g, mg) in enumerate(zip(comps, mags))]
    except (NotTridiagonalizable, LinearityCheckFailed):
        if eps is None:
            raise
        c1, c2 = wave.c1(eps), wave.c2(eps)
        total = comps[0] + c1 * comps[1] + c2 * comps[2]
        mag = np.abs(Tm0) + np.abs(B) + np.abs(c1 * Tm1) + np.abs(c2 * T)
        (rho, sigma), worst = _check_line(spec, y, total, tol, f"eps = {eps:g}", mag)
        return LinearityResult(rho, sigma, worst, (), wave)
    parts = tuple(f[0] for f in fits)
    worst = max(f[1] for f in fits)
    res = LinearityResult(0.0, 0.0, worst, parts, wave)
    if eps is not None:
        rho, sigma = res.at(eps)
        res = LinearityResult(rho, sigma, worst, parts, wave)
    return res


def _as_operator(obj, spec):
    if isinstance(obj, WaveOperator):
        return obj
    if isinstance(obj, PotentialConfig):
        return WaveOperator.dirac(obj, spec.eta)
    if isinstance(obj, EffectiveSchrodinger):
        return WaveOperator.schrodinger(obj)
    raise TypeError(f"cannot build a wave operator from {type(obj).__name__}")


@dataclass
class TridiagonalBands:
    """Energy-parameterised bands d(n, eps), c(n, eps) = J_{n,n+1} = J_{n+1,n}.

    ``basis`` is a fixed :class:`BasisSpec` or a callable eps -> BasisSpec for
    problems whose tridiagonalising basis depends on the energy.
    """

    wave: WaveOperator
    basis: object
    lin: LinearityResult | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def spec_at(self, eps):
        return self.basis(eps) if callable(self.basis) else self.basis

    def _rho_sigma(self, eps):
        if not callable(self.basis):
            if self.lin is None:
                self.lin = linearity(self.wave, self.basis)
            return self.lin.at(eps)
        key = float(eps)
        if key not in self._cache:
            if len(self._cache) > 256:
                self._cache.clear()
            self._cache[key] = linearity(self.wave, self.basis(eps), eps).at(eps)
        return self._cache[key]

    def arrays(self, eps, N):
        """Diagonal d_0..d_N and off-diagonal c_0..c_N at eps."""
        spec = self.spec_at(eps)
        K = self.wave.prefactor(eps) * spec.kappa ** 2
        rho, sigma = self._rho_sigma(eps)
        n = np.arange(N + 1, dtype=float)
        if spec.kind == "laguerre":
            nu = spec.poly[0]
            d = K * ((2 * n + nu + 1) * rho + sigma + n)
            c = -K * rho * np.sqrt((n + 1) * (n + nu + 1))
        else:
            mu, nu = spec.poly
            a, b = op.jacobi_recurrence(N + 1, mu, nu)
            d = K * (n * (n + mu + nu + 1) + sigma + rho * a[:N + 1])
            c = K * rho * b[:N + 1]
        return d, c

    def d(self, n, eps):
        return float(self.arrays(eps, n)[0][n])

    def c(self, n, eps):
        return float(self.arrays(eps, n)[1][n])

    def matrix(self, eps, N):
        """Dense (N+1) x (N+1) truncation."""
        d, c = self.arrays(eps, N)
        return np.diag(d) + np.diag(c[:N], 1) + np.diag(c[:N], -1)


def bands_laguerre(lin: LinearityResult, spec: BasisSpec, m: float | None = None) -> TridiagonalBands:
    if spec.kind != "laguerre":
        raise ValueError("bands_laguerre needs a Laguerre basis")
    return _bands_from(lin, spec, m)


def bands_jacobi(lin: LinearityResult, spec: BasisSpec, m: float | None = None) -> TridiagonalBands:
    if spec.kind != "jacobi":
        raise ValueError("bands_jacobi needs a Jacobi basis")
    return _bands_from(lin, spec, m)


def _bands_from(lin, spec, m):
    wave = lin.operator
    if wave is None:
        if m is None:
            raise ValueError("mass needed when the linearity result carries no operator")
        rho, sigma = lin.rho, lin.sigma
        wave = WaveOperator(lambda x: 0 * x, lambda x: 0 * x, lambda e: 0.0, lambda e: 0.0,
                            lambda e: spec.eta / (e + m), singular_eps=-m, eta=spec.eta)
        lin = LinearityResult(rho, sigma, lin.residual_bound)
    return TridiagonalBands(wave, spec, lin)


def make_bands(wave_or_config, basis) -> TridiagonalBands:
    """Bands for a fixed basis or an eps -> basis factory (linearity checked lazily)."""
    if callable(basis):
        wave = wave_or_config if isinstance(wave_or_config, WaveOperator) else None
        if wave is None:
            raise TypeError("an eps-dependent basis needs an explicit WaveOperator")
        return TridiagonalBands(wave, basis)
    wave = _as_operator(wave_or_config, basis)
    return TridiagonalBands(wave, basis, linearity(wave, basis))


# --- quadrature oracle --------------------------------------------------------

def _quad_vec(f, cmap, size):
    xs = _breakpoints(cmap)
    total = np.zeros(size)
    for a, b in zip(xs[:-1], xs[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            val, err = integrate.quad_vec(f, a, b, epsabs=1e-14, epsrel=1e-11, limit=2000)
        if not np.all(np.isfinite(val)):
            raise IntegrationError(f"quadrature failed on [{a}, {b}]")
        total += val
    return total


def quadrature_matrix(wave_or_config, spec: BasisSpec, eps: float, N: int, lower="kinetic_balance"):
    """Brute-force (N+1) x (N+1) matrix of the wave operator by adaptive quadrature.

    Both options project the upper row Q+ psi+ + (W - d/dx) psi- onto phi_n^+.
    ``lower="kinetic_balance"`` substitutes the kinetic-balance lower components, which
    after integration by parts gives <phi+|Q+|phi+> + ((eps+m)/eta) <phi-|phi->;
    ``lower="identity"`` substitutes phi- = phi+ (a deliberately wrong choice for
    comparisons, not symmetric in general).
    Reduced Schrodinger operators ignore ``lower``.
    """
    wave = _as_operator(wave_or_config, spec)
    size = (N + 1) ** 2
    cmap = spec.cmap

    def rows(x):
        y, _, _ = cmap.apply(np.atleast_1d(x))
        return spec.upper_y(0, y, nmax=N)[:, 0], spec.dupper_dx_y(0, y, nmax=N)[:, 0]

    if wave.kind == "schrodinger":
        def f(x):
            with np.errstate(all="ignore"):
                p, dp = rows(x)
                Mx = float(np.asarray(wave.M(np.atleast_1d(x), eps))[0])
                out = 0.5 * (np.outer(dp, dp) + Mx * np.outer(p, p))
            return np.nan_to_num(out).ravel()
        return _quad_vec(f, cmap, size).reshape(N + 1, N + 1)

    cfg = wave.config
    m, eta = cfg.m, wave.eta
    if eps + m == 0:
        raise SingularPrefactor("kinetic balance is singular at eps = -m")

    def f(x):
        with np.errstate(all="ignore"):
            xa = np.atleast_1d(x)
            p, dp = rows(x)
            S, V, W = (float(cfg.S(xa)[0]), float(cfg.V(xa)[0]), float(cfg.W(xa)[0]))
            qp = V + S + m - eps
            if lower == "kinetic_balance":
                lo = eta / (m + eps) * (W * p + dp)
                out = qp * np.outer(p, p) + (eps + m) / eta * np.outer(lo, lo)
            else:
                out = qp * np.outer(p, p) + np.outer(p, W * p - dp)
        return np.nan_to_num(out).ravel()

    return _quad_vec(f, cmap, size).reshape(N + 1, N + 1)


def element_quadrature(wave_or_config, spec: BasisSpec, eps: float, n: int, m: int, lower="kinetic_balance"):
    """Single matrix element J_{n,m} by quadrature (the brute-force oracle)."""
    N = max(n, m)
    return float(quadrature_matrix(wave_or_config, spec, eps, N, lower)[n, m])
