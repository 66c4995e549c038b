"""Coordinate maps and the square-integrable upper/lower spinor bases.

Laguerre bases are ``sqrt|kappa| A_n y^alpha e^{-beta y} L_n^nu(y)`` on maps with
``y' = kappa y^a e^{b y}``; Jacobi bases are
``sqrt|kappa| A_n (1-y)^alpha (1+y)^beta P_n^{(mu,nu)}(y)`` on maps with
``y' = kappa (1-y)^a (1+y)^b``. ``A_n`` is the orthonormalising constant of the
polynomial in its own weight.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import integrate

from . import orthopoly as op
from .errors import DomainError, IntegrationError, InvalidBasis, InvalidParameter, LimitUndefined, SingularKineticBalance


class MapKind(str, Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    EXP_DECAY = "exp_decay"
    TANH = "tanh"
    SHIFTED_EXP = "shifted_exp"
    COSINE = "cosine"


_LAGUERRE_MAPS = (MapKind.LINEAR, MapKind.QUADRATIC, MapKind.EXP_DECAY)


@dataclass(frozen=True)
class CoordinateMap:
    """Monotone map x -> y. ``shift`` moves the origin: y is evaluated at x - shift.

    The quadratic map is used on the half line x >= shift (basis functions extend
    to the whole line by parity).
    """

    kind: MapKind
    lam: float
    mu_scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", MapKind(self.kind))
        if not self.lam > 0:
            raise InvalidParameter("map scale lam must be positive")
        if not self.mu_scale > 0:
            raise InvalidParameter("mu_scale must be positive")

    @property
    def family(self):
        return "laguerre" if self.kind in _LAGUERRE_MAPS else "jacobi"

    @property
    def shape(self):
        """(kappa, a, b) of y' = kappa y^a e^{by} or kappa (1-y)^a (1+y)^b."""
        lam = self.lam
        return {
            MapKind.LINEAR: (lam, 0.0, 0.0),
            MapKind.QUADRATIC: (2 * lam, 0.5, 0.0),
            MapKind.EXP_DECAY: (-lam, 1.0, 0.0),
            MapKind.TANH: (lam, 1.0, 1.0),
            MapKind.SHIFTED_EXP: (lam, 1.0, 0.0),
            MapKind.COSINE: (-lam, 0.5, 0.5),
        }[self.kind]

    @property
    def x_domain(self):
        s, lam = self.shift, self.lam
        if self.kind in (MapKind.LINEAR, MapKind.QUADRATIC, MapKind.SHIFTED_EXP):
            return (s, math.inf)
        if self.kind is MapKind.COSINE:
            return (s, s + math.pi / lam)
        return (-math.inf, math.inf)

    @property
    def y_domain(self):
        return (0.0, math.inf) if self.family == "laguerre" else (-1.0, 1.0)

    def apply(self, x):
        """Return (y, y', y'') at x."""
        x = np.asarray(x, dtype=float)
        lo, hi = self.x_domain
        if self.kind is MapKind.EXP_DECAY:
            x = np.maximum(x, self.shift - 700.0 / self.lam)
        if np.any((x < lo) | (x > hi)):
            raise DomainError(f"x outside the {self.kind.value} map domain [{lo}, {hi}]")
        t = x - self.shift
        lam = self.lam
        k = self.kind
        if k is MapKind.LINEAR:
            return lam * t, lam + 0 * t, 0 * t
        if k is MapKind.QUADRATIC:
            return (lam * t) ** 2, 2 * lam * lam * t, 2 * lam * lam + 0 * t
        if k is MapKind.EXP_DECAY:
            y = self.mu_scale * np.exp(-lam * t)
            return y, -lam * y, lam * lam * y
        if k is MapKind.TANH:
            y = np.tanh(lam * t)
            s2 = 1 - y * y
            return y, lam * s2, -2 * lam * lam * y * s2
        if k is MapKind.SHIFTED_EXP:
            e = np.exp(-lam * t)
            return 1 - 2 * e, 2 * lam * e, -2 * lam * lam * e
        return np.cos(lam * t), -lam * np.sin(lam * t), -lam * lam * np.cos(lam * t)

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        lam = self.lam
        k = self.kind
        if k is MapKind.LINEAR:
            t = y / lam
        elif k is MapKind.QUADRATIC:
            t = np.sqrt(y) / lam
        elif k is MapKind.EXP_DECAY:
            t = -np.log(y / self.mu_scale) / lam
        elif k is MapKind.TANH:
            t = np.arctanh(y) / lam
        elif k is MapKind.SHIFTED_EXP:
            t = -np.log((1 - y) / 2) / lam
        else:
            t = np.arccos(y) / lam
        return t + self.shift

    def dydx_from_y(self, y):
        """y' expressed through y (uses the kappa, a, b shape)."""
        kappa, a, b = self.shape
        y = np.asarray(y, dtype=float)
        if self.family == "laguerre":
            return kappa * _pow(y, a) * np.exp(b * y)
        return kappa * _pow(1 - y, a) * _pow(1 + y, b)


def map_apply(cmap: CoordinateMap, x):
    return cmap.apply(x)


def _pow(base, p):
    """base**p with 0**p = 0 for p > 0, 1 for p = 0 and LimitUndefined for p < 0."""
    base = np.asarray(base, dtype=float)
    if p == 0:
        return np.ones_like(base)
    zero = base == 0
    if np.any(zero) and p < 0:
        raise LimitUndefined(f"factor with exponent {p} diverges at the endpoint")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(zero, 0.0, np.abs(base) ** p)
    return out


@dataclass(frozen=True)
class BasisSpec:
    """Upper-component basis: kind, exponents, polynomial parameters, map and eta.

    ``poly`` is ``(nu,)`` for Laguerre and ``(mu, nu)`` for Jacobi. Use
    :meth:`laguerre` / :meth:`jacobi` to get exponents satisfying the
    tridiagonality constraints automatically.
    """

    kind: str
    alpha: float
    beta: float
    poly: tuple
    cmap: CoordinateMap
    eta: float = 1.0

    def __post_init__(self):
        if self.kind not in ("laguerre", "jacobi"):
            raise InvalidBasis(f"unknown basis kind {self.kind!r}")
        if self.cmap.family != self.kind:
            raise InvalidBasis(f"{self.cmap.kind.value} map does not carry a {self.kind} basis")
        kappa, a, b = self.cmap.shape
        if self.kind == "laguerre":
            (nu,) = self.poly
            if not nu > -1:
                raise InvalidBasis(f"Laguerre nu={nu} must exceed -1")
            if abs(2 * self.alpha + a - nu - 1) > 1e-12 or abs(2 * self.beta - b - 1) > 1e-12:
                raise InvalidBasis("Laguerre constraint violated: need 2 alpha + a = nu + 1 and 2 beta - b = 1")
        else:
            mu, nu = self.poly
            if not (mu > -1 and nu > -1):
                raise InvalidBasis(f"Jacobi (mu, nu)=({mu}, {nu}) must exceed -1")
            if abs(2 * self.beta + b - nu - 1) > 1e-12 or abs(2 * self.alpha + a - mu - 1) > 1e-12:
                raise InvalidBasis("Jacobi constraint violated: need 2 alpha + a = mu + 1 and 2 beta + b = nu + 1")
        p, q = measure_exponents(self)
        if not p > -1 or (self.kind == "laguerre" and not q > 0) or (self.kind == "jacobi" and not q > -1):
            raise InvalidBasis("basis functions are not square integrable in x for these exponents")

    @classmethod
    def laguerre(cls, cmap, nu, eta=1.0):
        kappa, a, b = cmap.shape
        return cls("laguerre", (nu + 1 - a) / 2, (1 + b) / 2, (float(nu),), cmap, eta)

    @classmethod
    def jacobi(cls, cmap, mu, nu, eta=1.0):
        kappa, a, b = cmap.shape
        return cls("jacobi", (mu + 1 - a) / 2, (nu + 1 - b) / 2, (float(mu), float(nu)), cmap, eta)

    @property
    def kappa(self):
        return self.cmap.shape[0]

    def log_norm(self, n):
        """log A_n including the sqrt|kappa| factor."""
        if self.kind == "laguerre":
            ln = op.laguerre_log_norm(n, self.poly[0])
        else:
            ln = op.jacobi_log_norm(n, *self.poly)
        return 0.5 * (math.log(abs(self.kappa)) - ln)

    @property
    def x_orthonormal(self):
        """True when the basis is orthonormal in the x-measure (dx = dy/|y'|)."""
        kappa, a, b = self.cmap.shape
        if self.kind == "laguerre":
            return a == 0.5 and b == 0.0
        return a == 0.5 and b == 0.5

    # --- evaluation in y ----------------------------------------------------

    def _envelope(self, y):
        if self.kind == "laguerre":
            return _pow(y, self.alpha) * np.exp(-self.beta * y)
        return _pow(1 - y, self.alpha) * _pow(1 + y, self.beta)

    @staticmethod
    def _finite(rows, y):
        # y -> infinity on Laguerre maps: the exponential envelope wins
        bad = ~np.isfinite(rows)
        if np.any(bad):
            rows = np.where(bad & (y > 1e3), 0.0, rows)
        return rows

    def upper_y(self, n, y, nmax=None):
        """phi_n^+ as a function of y; with ``nmax`` returns rows 0..nmax."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        top = n if nmax is None else nmax
        if self.kind == "laguerre":
            tab = op.laguerre_table(top, self.poly[0], y)
        else:
            tab = op.jacobi_table(top, *self.poly, y)
        with np.errstate(all="ignore"):
            env = self._envelope(y)
            norms = np.exp([self.log_norm(k) for k in range(top + 1)])
            rows = self._finite(norms[:, None] * tab * env, y)
        return rows if nmax is not None else rows[n]

    def dupper_dx_y(self, n, y, nmax=None):
        """d phi_n^+/dx as a function of y, using y' = kappa y^a e^{by} (or Jacobi form)."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        with np.errstate(all="ignore"):
            return self._dupper(n, y, nmax)

    def _dupper(self, n, y, nmax):
        top = n if nmax is None else nmax
        kappa, a, b = self.cmap.shape
        al, be = self.alpha, self.beta
        norms = np.exp([self.log_norm(k) for k in range(top + 1)])
        if self.kind == "laguerre":
            nu = self.poly[0]
            P = op.laguerre_table(top, nu, y)
            dP = np.zeros_like(P)
            if top >= 1:
                dP[1:] = -op.laguerre_table(top - 1, nu + 1, y)
            ex = np.exp((b - be) * y)
            t1 = al * _pow(y, al + a - 1) if al != 0 else 0.0 * y
            t2 = _pow(y, al + a)
            rows = kappa * ex * (t1 * P + t2 * (dP - be * P))
        else:
            mu, nu = self.poly
            P = op.jacobi_table(top, mu, nu, y)
            dP = np.zeros_like(P)
            if top >= 1:
                k = np.arange(1, top + 1)
                dP[1:] = 0.5 * (k + mu + nu + 1)[:, None] * op.jacobi_table(top - 1, mu + 1, nu + 1, y)
            base = _pow(1 - y, al + a) * _pow(1 + y, be + b)
            tm = al * _pow(1 - y, al + a - 1) * _pow(1 + y, be + b) if al != 0 else 0.0 * y
            tp = be * _pow(1 - y, al + a) * _pow(1 + y, be + b - 1) if be != 0 else 0.0 * y
            rows = kappa * (-tm * P + tp * P + base * dP)
        rows = self._finite(norms[:, None] * rows, y)
        return rows if nmax is not None else rows[n]


def basis_upper(spec: BasisSpec, n, x):
    y, _, _ = spec.cmap.apply(x)
    out = spec.upper_y(n, y)
    return float(out[0]) if np.ndim(x) == 0 else out


def basis_upper_dx(spec: BasisSpec, n, x):
    y, _, _ = spec.cmap.apply(x)
    out = spec.dupper_dx_y(n, y)
    return float(out[0]) if np.ndim(x) == 0 else out


def basis_lower(spec: BasisSpec, n, x, W, eps, m):
    """Kinetic-balance lower component eta/(m+eps) [W + d/dx] phi_n^+."""
    if eps + m == 0:
        raise SingularKineticBalance("kinetic balance is singular at eps = -m")
    xa = np.asarray(x, dtype=float)
    y, _, _ = spec.cmap.apply(xa)
    phi = spec.upper_y(n, y)
    dphi = spec.dupper_dx_y(n, y)
    wv = W(np.atleast_1d(xa)) if callable(W) else W
    out = spec.eta / (m + eps) * (wv * phi + dphi)
    return float(out[0]) if np.ndim(x) == 0 else out


def gauge_away(U, x0, x):
    """Phase Lambda(x) = int_{x0}^{x} U dt removing the spatial vector potential."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    f = (lambda t: float(U(t))) if callable(U) else (lambda t: float(U))
    for i, xi in enumerate(xs):
        if xi == x0:
            out[i] = 0.0
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(f, x0, xi, epsabs=1e-13, epsrel=1e-12, limit=200)
            except (integrate.IntegrationWarning, ZeroDivisionError, DomainError) as exc:
                raise IntegrationError(f"U is not integrable on [{x0}, {xi}]: {exc}") from exc
        if not np.isfinite(val):
            raise IntegrationError(f"U is not integrable on [{x0}, {xi}]")
        out[i] = val
    return float(out[0]) if np.ndim(x) == 0 else out


def measure_exponents(spec: BasisSpec):
    """Exponents of phi_n phi_m dx in y: (p, c) for y^p e^{-c y}, or (p, q) for (1-y)^p (1+y)^q."""
    kappa, a, b = spec.cmap.shape
    if spec.kind == "laguerre":
        return 2 * spec.alpha - a, 2 * spec.beta + b
    return 2 * spec.alpha - a, 2 * spec.beta - b


def gram_matrix(spec: BasisSpec, nmax):
    """x-space overlaps <phi_n|phi_m> for n, m <= nmax.

    The x-measure turns into a polynomial weight in y, so a Gauss rule for that
    weight is exact. For x-orthonormal bases the result is the identity.
    """
    npts = nmax + 8
    p, q = measure_exponents(spec)
    if spec.kind == "laguerre":
        nu = spec.poly[0]
        t, w = op.gauss_laguerre(npts, p)
        y = t / q
        w = w / q ** (p + 1)
        P = op.laguerre_table(nmax, nu, y)
    else:
        y, w = op.gauss_jacobi(npts, p, q)
        P = op.jacobi_table(nmax, *spec.poly, y)
    norms = np.exp([spec.log_norm(k) for k in range(nmax + 1)]) / math.sqrt(abs(spec.kappa))
    rows = norms[:, None] * P
    return (rows * w) @ rows.T


def _breakpoints(cmap):
    lo, hi = cmap.x_domain
    ys = [0.5, 2.0, 8.0, 30.0, 100.0] if cmap.family == "laguerre" else [-0.999, -0.9, -0.5, 0.0, 0.5, 0.9, 0.999]
    xs = sorted(float(cmap.inverse(v)) for v in ys)
    return [lo] + [x for x in xs if lo < x < hi] + [hi]


def quad_x(f, cmap):
    """Integrate f(x) over the map's x-domain with adaptive Gauss-Kronrod pieces."""
    xs = _breakpoints(cmap)
    total = 0.0
    for a, b in zip(xs[:-1], xs[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(f, a, b, epsabs=1e-15, epsrel=1e-12, limit=400)
        total += val
    return total


def gram_matrix_quad(spec: BasisSpec, nmax):
    """Brute-force x-space Gram matrix by adaptive quadrature (test oracle)."""
    G = np.empty((nmax + 1, nmax + 1))
    for i in range(nmax + 1):
        for j in range(i, nmax + 1):
            G[i, j] = G[j, i] = quad_x(lambda x: basis_upper(spec, i, x) * basis_upper(spec, j, x), spec.cmap)
    return G
