"""Pure-Python reference versions of the compiled kernels."""
import math

import numpy as np

_TINY = 1e-300


def tridiag_pivots(d, c):
    """Sturm count, log|det| and sign of det for a symmetric tridiagonal matrix."""
    d = np.asarray(d, dtype=float)
    c = np.asarray(c, dtype=float)
    scale = max(np.max(np.abs(d), initial=0.0), np.max(np.abs(c), initial=0.0)) or 1.0
    neg, sgn, logdet = 0, 1, 0.0
    q = float(d[0])
    for k in range(len(d)):
        if k > 0:
            q = float(d[k]) - float(c[k - 1]) ** 2 / q
        if q == 0.0:
            q = 1e-300 * scale + _TINY
        if q < 0.0:
            neg += 1
            sgn = -sgn
        logdet += math.log(abs(q))
    return neg, logdet, sgn


def three_term_run(d, c, f_minus1, f0, rescale_every=32):
    d = np.asarray(d, dtype=float)
    c = np.asarray(c, dtype=float)
    N = len(d)
    f = np.empty(N + 1)
    logs = np.zeros(N + 1)
    prev, cur, acc = float(f_minus1), float(f0), 0.0
    f[0] = cur
    for n in range(N):
        if c[n] == 0.0:
            raise ZeroDivisionError(n)
        cprev = c[n - 1] if n > 0 else 0.0
        nxt = -(d[n] * cur + cprev * prev) / c[n]
        prev, cur = cur, nxt
        if (n + 1) % rescale_every == 0:
            big = max(abs(cur), abs(prev))
            if big > 0.0:
                prev /= big
                cur /= big
                acc += math.log(big)
        f[n + 1] = cur
        logs[n + 1] = acc
    return f, logs


def laguerre_table(nmax, nu, y):
    y = np.asarray(y, dtype=float)
    L = np.empty((nmax + 1, y.size))
    L[0] = 1.0
    if nmax >= 1:
        L[1] = 1.0 + nu - y
    for n in range(1, nmax):
        L[n + 1] = ((2 * n + nu + 1 - y) * L[n] - (n + nu) * L[n - 1]) / (n + 1)
    return L


def jacobi_table(nmax, a, b, y):
    y = np.asarray(y, dtype=float)
    P = np.empty((nmax + 1, y.size))
    P[0] = 1.0
    if nmax >= 1:
        P[1] = 0.5 * ((a + b + 2) * y + a - b)
    for n in range(1, nmax):
        s = 2 * n + a + b
        c1 = 2 * (n + 1) * (n + a + b + 1) * s
        c2 = (s + 1) * (s + 2) * s
        c3 = (s + 1) * (a * a - b * b)
        c4 = 2 * (n + a) * (n + b) * (s + 2)
        P[n + 1] = ((c2 * y + c3) * P[n] - c4 * P[n - 1]) / c1
    return P


def mp_table(nmax, mu, z, theta, hyperbolic):
    z = np.asarray(z, dtype=float)
    if hyperbolic:
        sn, cs = math.sinh(theta), math.cosh(theta)
    else:
        sn, cs = math.sin(theta), math.cos(theta)
    P = np.empty((nmax + 1, z.size))
    P[0] = 1.0
    for n in range(nmax):
        nxt = 2.0 * (z * sn + (n + mu) * cs) * P[n]
        if n > 0:
            nxt = nxt - math.sqrt(n * (n + 2 * mu - 1)) * P[n - 1]
        P[n + 1] = nxt / math.sqrt((n + 1) * (n + 2 * mu))
    return P
