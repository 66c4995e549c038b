"""Laguerre, Jacobi and Meixner-Pollaczek polynomials.

Everything is evaluated by forward three-term recurrence in the degree, vectorised
over the argument. Normalisation constants are kept in log space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln, loggamma

from . import kernels
from .errors import DomainError, InvalidParameter


class PolyKind(str, Enum):
    LAGUERRE = "laguerre"
    JACOBI = "jacobi"
    MEIXNER_POLLACZEK = "meixner_pollaczek"


@dataclass(frozen=True)
class PolyFamily:
    """A polynomial family together with its parameters.

    ``params`` holds ``nu`` for Laguerre, ``mu, nu`` for Jacobi and
    ``mu, theta, hyperbolic`` for Meixner-Pollaczek.
    """

    kind: PolyKind
    params: dict

    def __post_init__(self):
        p = self.params
        if self.kind is PolyKind.LAGUERRE:
            _check_laguerre(p["nu"])
        elif self.kind is PolyKind.JACOBI:
            _check_jacobi(p["mu"], p["nu"])
        else:
            _check_mp(p["mu"], p["theta"], p.get("hyperbolic", False))

    def eval(self, n, x):
        p = self.params
        if self.kind is PolyKind.LAGUERRE:
            return laguerre_eval(n, p["nu"], x)
        if self.kind is PolyKind.JACOBI:
            return jacobi_eval(n, p["mu"], p["nu"], x)
        return mp_eval(n, p["mu"], x, p["theta"], p.get("hyperbolic", False))


def _check_laguerre(nu):
    if not nu > -1:
        raise InvalidParameter(f"Laguerre parameter nu={nu} must exceed -1")


def _check_jacobi(mu, nu):
    if not (mu > -1 and nu > -1):
        raise InvalidParameter(f"Jacobi parameters (mu, nu)=({mu}, {nu}) must exceed -1")


def _check_mp(mu, theta, hyperbolic):
    if not mu > 0:
        raise InvalidParameter(f"Meixner-Pollaczek mu={mu} must be positive")
    if hyperbolic:
        if not theta > 0:
            raise InvalidParameter("hyperbolic Meixner-Pollaczek needs theta > 0")
    elif not 0 < theta < math.pi:
        raise InvalidParameter("Meixner-Pollaczek needs 0 < theta < pi")


def _as_array(x):
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    return arr, np.ndim(x) == 0


def _check_degree(n):
    if int(n) != n or n < 0:
        raise InvalidParameter(f"degree must be a non-negative integer, got {n}")
    return int(n)


# --- Laguerre ----------------------------------------------------------------

def laguerre_table(nmax, nu, y):
    """Rows ``L_0^nu .. L_nmax^nu`` evaluated at every entry of ``y``."""
    _check_laguerre(nu)
    y = np.ascontiguousarray(np.atleast_1d(np.asarray(y, dtype=float)))
    return kernels.laguerre_table(int(nmax), float(nu), y)


def laguerre_eval(n, nu, y):
    n = _check_degree(n)
    arr, scalar = _as_array(y)
    out = laguerre_table(n, nu, arr)[n]
    return float(out[0]) if scalar else out


def laguerre_deriv(n, nu, y):
    """d/dy L_n^nu = -L_{n-1}^{nu+1}."""
    n = _check_degree(n)
    arr, scalar = _as_array(y)
    out = np.zeros_like(arr) if n == 0 else -laguerre_table(n - 1, nu + 1, arr)[n - 1]
    return float(out[0]) if scalar else out


def laguerre_log_norm(n, nu):
    """log of the integral of y^nu e^-y (L_n^nu)^2 over [0, inf)."""
    return gammaln(n + nu + 1) - gammaln(n + 1)


def laguerre_recurrence(nmax, nu):
    """Diagonal and off-diagonal of the orthonormal Laguerre Jacobi matrix.

    The off-diagonal carries the sign of the standard normalisation
    (leading coefficient (-1)^n / n!).
    """
    n = np.arange(nmax + 1, dtype=float)
    diag = 2 * n + nu + 1
    off = -np.sqrt((n[:-1] + 1) * (n[:-1] + nu + 1))
    return diag, off


# --- Jacobi ------------------------------------------------------------------

def jacobi_table(nmax, mu, nu, y):
    """Rows ``P_0^{(mu,nu)} .. P_nmax^{(mu,nu)}``; weight (1-y)^mu (1+y)^nu."""
    _check_jacobi(mu, nu)
    y = np.ascontiguousarray(np.atleast_1d(np.asarray(y, dtype=float)))
    if np.any(np.abs(y) > 1 + 1e-14):
        raise DomainError("Jacobi argument outside [-1, 1]")
    return kernels.jacobi_table(int(nmax), float(mu), float(nu), y)


def jacobi_eval(n, mu, nu, y):
    n = _check_degree(n)
    arr, scalar = _as_array(y)
    out = jacobi_table(n, mu, nu, arr)[n]
    return float(out[0]) if scalar else out


def jacobi_deriv(n, mu, nu, y):
    """d/dy P_n^{(mu,nu)} = (n+mu+nu+1)/2 P_{n-1}^{(mu+1,nu+1)}; valid at the endpoints."""
    n = _check_degree(n)
    arr, scalar = _as_array(y)
    if n == 0:
        out = np.zeros_like(arr)
    else:
        out = 0.5 * (n + mu + nu + 1) * jacobi_table(n - 1, mu + 1, nu + 1, arr)[n - 1]
    return float(out[0]) if scalar else out


def jacobi_derivative_identity(n, mu, nu, y):
    """Right-hand side of (1-y^2) dP_n/dy written with P_n and P_{n-1}.

    This is the index-corrected form of the derivative identity: the second term
    carries P_{n-1}.
    """
    n = _check_degree(n)
    arr, scalar = _as_array(y)
    if n == 0:
        out = np.zeros_like(arr)
    else:
        s = 2 * n + mu + nu
        tab = jacobi_table(n, mu, nu, arr)
        out = -n * (arr + (nu - mu) / s) * tab[n] + 2 * (n + nu) * (n + mu) / s * tab[n - 1]
    return float(out[0]) if scalar else out


def jacobi_log_norm(n, mu, nu):
    """log of the integral of (1-y)^mu (1+y)^nu (P_n)^2 over [-1, 1]."""
    s = 2 * n + mu + nu + 1
    if n == 0:
        # Gamma(mu+nu+1)*(mu+nu+1) = Gamma(mu+nu+2) stays finite when mu+nu = -1
        return ((mu + nu + 1) * math.log(2) + gammaln(mu + 1) + gammaln(nu + 1)
                - gammaln(mu + nu + 2))
    return ((mu + nu + 1) * math.log(2) - math.log(s) + gammaln(n + mu + 1)
            + gammaln(n + nu + 1) - gammaln(n + mu + nu + 1) - gammaln(n + 1))


def jacobi_recurrence(nmax, mu, nu):
    """Diagonal a_n and off-diagonal b_{n+1} of the orthonormal Jacobi matrix.

    Removable singularities at small n (mu + nu in {0, -1}) use their limits.
    """
    a = np.empty(nmax + 1)
    b = np.empty(max(nmax, 0))
    for n in range(nmax + 1):
        s = 2 * n + mu + nu
        if abs(s) < 1e-14:
            a[n] = (nu - mu) / (s + 2)
        else:
            a[n] = (nu - mu) * (nu + mu) / (s * (s + 2))
    for k in range(1, nmax + 1):
        b[k - 1] = jacobi_offdiag(k, mu, nu)
    return a, b


def jacobi_offdiag(n, mu, nu):
    """b_n coupling p_n and p_{n-1} of the orthonormal Jacobi recurrence (n >= 1)."""
    s = 2 * n + mu + nu
    if n == 1:
        # (n+mu+nu)/(s-1) -> 1 as mu+nu -> -1
        num = 4 * (1 + mu) * (1 + nu)
        return math.sqrt(num / ((s * s) * (s + 1)))
    val = 4 * n * (n + mu) * (n + nu) * (n + mu + nu) / (s * s * (s - 1) * (s + 1))
    return math.sqrt(val)


# --- Meixner-Pollaczek --------------------------------------------------------

def mp_table(nmax, mu, z, theta, hyperbolic=False):
    """Orthonormal Meixner-Pollaczek polynomials of degree 0..nmax.

    In the hyperbolic form the recurrence is written with the real left factor
    ``z sinh(theta)``, i.e. ``z`` stands for the real combination obtained after
    continuing theta to i*theta.
    """
    _check_mp(mu, theta, hyperbolic)
    z = np.ascontiguousarray(np.atleast_1d(np.asarray(z, dtype=float)))
    return kernels.mp_table(int(nmax), float(mu), z, float(theta), bool(hyperbolic))


def mp_eval(n, mu, z, theta, hyperbolic=False):
    n = _check_degree(n)
    arr, scalar = _as_array(z)
    out = mp_table(n, mu, arr, theta, hyperbolic)[n]
    return float(out[0]) if scalar else out


def mp_recurrence_residual(n, mu, z, theta, hyperbolic=False):
    """Residual of the three-term relation at degree n, relative to the size of its terms."""
    tab = mp_table(n + 1, mu, np.atleast_1d(z), theta, hyperbolic)
    sn, cs = (math.sinh(theta), math.cosh(theta)) if hyperbolic else (math.sin(theta), math.cos(theta))
    lhs = z * sn * tab[n]
    prev = tab[n - 1] if n > 0 else 0.0
    terms = (-(n + mu) * cs * tab[n], 0.5 * math.sqrt(n * (n + 2 * mu - 1)) * prev,
             0.5 * math.sqrt((n + 1) * (n + 2 * mu)) * tab[n + 1])
    scale = np.abs(lhs) + sum(np.abs(t) for t in terms)
    return np.abs(lhs - sum(terms)) / np.where(scale > 0, scale, 1.0)


def mp_log_weight(z, mu, theta):
    _check_mp(mu, theta, False)
    z = np.asarray(z, dtype=float)
    lg = loggamma(mu + 1j * z).real
    return (-math.log(2 * math.pi) - gammaln(2 * mu) + 2 * mu * math.log(2 * math.sin(theta))
            + (2 * theta - math.pi) * z + 2 * lg)


def mp_weight(z, mu, theta):
    """Orthogonality weight of the Meixner-Pollaczek polynomials (strictly positive)."""
    out = np.exp(mp_log_weight(z, mu, theta))
    return float(out) if np.ndim(out) == 0 else out


def mp_recurrence(nmax, mu, theta, hyperbolic=False):
    """Jacobi matrix (diag, off) whose eigenvalues are the zeros in z.

    Divides the three-term relation through by sin(theta) (or sinh(theta)).
    """
    sn, cs = (math.sinh(theta), math.cosh(theta)) if hyperbolic else (math.sin(theta), math.cos(theta))
    n = np.arange(nmax + 1, dtype=float)
    diag = -(n + mu) * cs / sn
    off = 0.5 * np.sqrt((n[:-1] + 1) * (n[:-1] + 2 * mu)) / sn
    return diag, off


# --- Gauss rules -------------------------------------------------------------

def gauss_from_recurrence(diag, off, mu0):
    """Golub-Welsch nodes with Christoffel weights.

    Nodes are eigenvalues of the Jacobi matrix. Weights are 1 / sum_k p_k(x)^2 over
    the orthonormal polynomials run through the same recurrence; unlike mu0 v_0^2
    this keeps full relative accuracy in the tiny tail weights.
    """
    diag = np.asarray(diag, float)
    off = np.asarray(off, float)
    nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    prev = np.zeros_like(nodes)
    cur = np.full_like(nodes, 1.0 / math.sqrt(mu0))
    total = cur * cur
    for k in range(diag.size - 1):
        nxt = ((nodes - diag[k]) * cur - (off[k - 1] * prev if k else 0.0)) / off[k]
        prev, cur = cur, nxt
        total += cur * cur
    return nodes, 1.0 / total


def gauss_laguerre(npts, nu):
    """Nodes/weights for the weight y^nu e^-y on [0, inf)."""
    d, c = laguerre_recurrence(npts - 1, nu)
    return gauss_from_recurrence(d, c, math.exp(gammaln(nu + 1)))


def gauss_jacobi(npts, mu, nu):
    """Nodes/weights for (1-y)^mu (1+y)^nu on [-1, 1]."""
    a, b = jacobi_recurrence(npts - 1, mu, nu)
    return gauss_from_recurrence(a, b, math.exp(jacobi_log_norm(0, mu, nu)))
