# cython: language_level=3
"""Compiled inner loops. Mirrors ``_kernels_py`` function for function."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, log, sqrt, sin, cos, sinh, cosh

cnp.import_array()

cdef double TINY = 1e-300


def tridiag_pivots(double[::1] d, double[::1] c):
    """Sturm count, log|det| and sign of det for a symmetric tridiagonal matrix."""
    cdef Py_ssize_t n = d.shape[0], k
    cdef double q, scale = 0.0, logdet = 0.0
    cdef int neg = 0, sgn = 1
    for k in range(n):
        if fabs(d[k]) > scale:
            scale = fabs(d[k])
    for k in range(n - 1):
        if fabs(c[k]) > scale:
            scale = fabs(c[k])
    if scale == 0.0:
        scale = 1.0
    q = d[0]
    for k in range(n):
        if k > 0:
            q = d[k] - c[k - 1] * c[k - 1] / q
        if q == 0.0:
            q = 1e-300 * scale + TINY
        if q < 0.0:
            neg += 1
            sgn = -sgn
        logdet += log(fabs(q))
    return neg, logdet, sgn


def three_term_run(double[::1] d, double[::1] c, double f_minus1, double f0,
                   int rescale_every=32):
    """Forward recursion d_n f_n + c_{n-1} f_{n-1} + c_n f_{n+1} = 0.

    ``c`` has the same length as ``d``; returns scaled values and the natural log
    of the scale factor attached to each entry.
    """
    cdef Py_ssize_t N = d.shape[0], n
    out = np.empty(N + 1, dtype=np.float64)
    logs = np.zeros(N + 1, dtype=np.float64)
    cdef double[::1] f = out
    cdef double[::1] ls = logs
    cdef double prev = f_minus1, cur = f0, nxt, cprev, big, acc = 0.0
    f[0] = f0
    for n in range(N):
        if c[n] == 0.0:
            raise ZeroDivisionError(n)
        cprev = c[n - 1] if n > 0 else 0.0
        nxt = -(d[n] * cur + cprev * prev) / c[n]
        prev = cur
        cur = nxt
        if (n + 1) % rescale_every == 0:
            big = fabs(cur) if fabs(cur) > fabs(prev) else fabs(prev)
            if big > 0.0:
                prev /= big
                cur /= big
                acc += log(big)
        f[n + 1] = cur
        ls[n + 1] = acc
    return out, logs


def laguerre_table(int nmax, double nu, double[::1] y):
    cdef Py_ssize_t m = y.shape[0], i, n
    cdef double a1, a2, inv
    out = np.empty((nmax + 1, m), dtype=np.float64)
    cdef double[:, ::1] L = out
    for i in range(m):
        L[0, i] = 1.0
    if nmax >= 1:
        for i in range(m):
            L[1, i] = 1.0 + nu - y[i]
    # degree-outer loops keep the inner sweep contiguous
    for n in range(1, nmax):
        a1 = 2 * n + nu + 1
        a2 = n + nu
        inv = 1.0 / (n + 1)
        for i in range(m):
            L[n + 1, i] = ((a1 - y[i]) * L[n, i] - a2 * L[n - 1, i]) * inv
    return out


def jacobi_table(int nmax, double a, double b, double[::1] y):
    cdef Py_ssize_t m = y.shape[0], i, n
    cdef double s, c1, c2, c3, c4
    out = np.empty((nmax + 1, m), dtype=np.float64)
    cdef double[:, ::1] P = out
    for i in range(m):
        P[0, i] = 1.0
    if nmax >= 1:
        for i in range(m):
            P[1, i] = 0.5 * ((a + b + 2) * y[i] + a - b)
    for n in range(1, nmax):
        s = 2 * n + a + b
        c1 = 2 * (n + 1) * (n + a + b + 1) * s
        c2 = (s + 1) * (s + 2) * s / c1
        c3 = (s + 1) * (a * a - b * b) / c1
        c4 = 2 * (n + a) * (n + b) * (s + 2) / c1
        for i in range(m):
            P[n + 1, i] = (c2 * y[i] + c3) * P[n, i] - c4 * P[n - 1, i]
    return out


def mp_table(int nmax, double mu, double[::1] z, double theta, bint hyperbolic):
    cdef Py_ssize_t m = z.shape[0], i, n
    cdef double sn, cs, back, inv, shift
    if hyperbolic:
        sn = sinh(theta)
        cs = cosh(theta)
    else:
        sn = sin(theta)
        cs = cos(theta)
    out = np.empty((nmax + 1, m), dtype=np.float64)
    cdef double[:, ::1] P = out
    for i in range(m):
        P[0, i] = 1.0
    for n in range(0, nmax):
        shift = (n + mu) * cs
        back = sqrt(n * (n + 2 * mu - 1))
        inv = 1.0 / sqrt((n + 1) * (n + 2 * mu))
        for i in range(m):
            if n > 0:
                P[n + 1, i] = (2.0 * (z[i] * sn + shift) * P[n, i] - back * P[n - 1, i]) * inv
            else:
                P[n + 1, i] = 2.0 * (z[i] * sn + shift) * P[n, i] * inv
    return out
