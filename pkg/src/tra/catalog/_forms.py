"""Closed-form wavefunction building blocks shared by the catalog entries."""
from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import polynomial as P

from .. import orthopoly as op
from ..errors import SeriesDivergence


def _logpow(base, p):
    with np.errstate(divide="ignore", invalid="ignore"):
        out = p * np.log(base)
    return np.where(base > 0, out, -np.inf if p > 0 else 0.0)


def jacobi_wave(y, a, b, mu, nu, n):
    """(1-y)^a (1+y)^b P_n^{(mu,nu)}(y)."""
    y = np.clip(np.asarray(y, dtype=float), -1.0, 1.0)
    env = np.exp(_logpow(1 - y, a) + _logpow(1 + y, b))
    return env * op.jacobi_table(n, mu, nu, y)[n]


def _jacobi_from_logs(y, l1m, l1p, a, b, mu, nu, n):
    return np.exp(a * l1m + b * l1p) * op.jacobi_table(n, mu, nu, np.clip(y, -1.0, 1.0))[n]


def tanh_wave(lam, x, a, b, mu, nu, n):
    """(1-y)^a (1+y)^b P_n^{(mu,nu)}(y), y = tanh(lam x), with the envelope kept accurate in the tails."""
    t = lam * np.asarray(x, dtype=float)
    l1m = math.log(2.0) - np.logaddexp(0.0, 2 * t)
    l1p = math.log(2.0) - np.logaddexp(0.0, -2 * t)
    return _jacobi_from_logs(np.tanh(t), l1m, l1p, a, b, mu, nu, n)


def shifted_exp_wave(lam, x, a, b, mu, nu, n):
    """Same with y = 1 - 2 e^{-lam x} on x > 0."""
    t = lam * np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        l1p = math.log(2.0) + np.log(-np.expm1(-t))
    return _jacobi_from_logs(1 - 2 * np.exp(-t), math.log(2.0) - t, l1p, a, b, mu, nu, n)


def laguerre_wave(y, a, nu, n):
    """y^a e^{-y/2} L_n^nu(y)."""
    y = np.asarray(y, dtype=float)
    env = np.exp(_logpow(y, a) - 0.5 * y)
    return env * op.laguerre_table(n, nu, y)[n]


def hermite_wave(t, n):
    """H_n(t) e^{-t^2/2} up to a constant, through the Laguerre parity split."""
    t = np.asarray(t, dtype=float)
    j = n // 2
    if n % 2 == 0:
        poly = op.laguerre_table(j, -0.5, t * t)[j]
    else:
        poly = t * op.laguerre_table(j, 0.5, t * t)[j]
    return poly * np.exp(-0.5 * t * t)


def ladder_wave(kind: str, lam: float, s: float, B: float, n: int):
    """Excited states of the trigonometric / hyperbolic Rosen-Morse wells by raising operators.

    ``kind="tan"``: U = lam^2 s(s-1)/2 sec^2(lam x) + B tan(lam x) on |lam x| < pi/2.
    ``kind="coth"``: U = lam^2 s(s-1)/2 csch^2(lam x) + B coth(lam x) on x > 0.
    The state is g_{s+n}(x) p(t) with t = tan or coth and p a degree-n polynomial
    obtained by applying (-d/dx + W_sigma) for sigma = s+n-1, ..., s.
    """
    top = s + n
    if kind == "tan":
        def beta(sig):
            return -B / (sig * lam)
        # g'/g = -top*lam*t + beta(top);  W_sig = sig*lam*t - beta(sig);  t' = lam(1 + t^2)
        gp = np.array([beta(top), -top * lam])
        tprime = np.array([lam, 0.0, lam])

        def W(sig):
            return np.array([-beta(sig), sig * lam])

        def g(x):
            return np.exp(top * np.log(np.cos(lam * x)) + beta(top) * x)

        def t_of(x):
            return np.tan(lam * x)
    elif kind == "coth":
        def b(sig):
            return -B / (sig * lam)
        gp = np.array([-b(top), top * lam])
        tprime = np.array([lam, 0.0, -lam])

        def W(sig):
            return np.array([b(sig), -sig * lam])

        def g(x):
            return np.exp(top * np.log(np.sinh(lam * x)) - b(top) * x)

        def t_of(x):
            return 1.0 / np.tanh(lam * x)
    else:
        raise ValueError(f"unknown ladder kind {kind!r}")

    poly = np.array([1.0])
    for j in range(n - 1, -1, -1):
        sig = s + j
        term = P.polymul(P.polysub(W(sig), gp), poly)
        poly = P.polysub(term, P.polymul(tprime, P.polyder(poly)))

    def psi(x):
        x = np.asarray(x, dtype=float)
        return g(x) * P.polyval(t_of(x), poly)

    return psi


def series_wave(spec, coeffs, tol=1e-13):
    """Callable x -> sum_j f_j phi_j(x), trimmed where the coefficients have decayed.

    Raises SeriesDivergence when the coefficients have not decayed by the end.
    """
    f = np.asarray(coeffs, dtype=float)
    scale = np.max(np.abs(f))
    if not np.isfinite(scale) or scale == 0:
        raise SeriesDivergence("expansion coefficients are zero or not finite")
    big = np.nonzero(np.abs(f) > tol * scale)[0]
    last = int(big[-1])
    if last > 0.9 * (f.size - 1):
        raise SeriesDivergence(f"coefficients have not decayed after {f.size} terms "
                               f"(|f_last|/max = {abs(f[-1]) / scale:.2e})")
    f = f[:last + 1]

    def psi(x):
        x = np.asarray(x, dtype=float)
        xr = x.ravel()
        quad = spec.cmap.kind.value == "quadratic"
        s0 = spec.cmap.shift
        y, _, _ = spec.cmap.apply(s0 + np.abs(xr - s0) if quad else xr)
        out = f @ spec.upper_y(0, y, nmax=last)
        if quad and spec.poly[0] > 0:
            # odd continuation to x < shift
            out = np.where(xr < s0, -out, out)
        return out.reshape(x.shape)

    psi.coefficients = f
    return psi
