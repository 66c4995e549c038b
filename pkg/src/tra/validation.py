"""Numerical self-checks shared by the ``validate`` command and the acceptance tests.

Every check returns :class:`Check` records carrying the measured value and the
threshold it is held to, so reports are machine readable.
"""
from __future__ import annotations

import csv
import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from importlib import resources

import numpy as np

from . import catalog as cat
from . import orthopoly as op
from .basis import gram_matrix
from .catalog._dirac import general_oscillator_mp_level
from .errors import InvalidBoundState, TRAError
from .jmatrix import make_bands, quadrature_matrix
from .solver import Branch, eigenvalue_scan
from .spinor import DEFAULT_POINTS, catalog_residual

TABLE2_KAPPAS = (1.5, 0.1)
TABLE2_LEVELS = 10
TABLE2_TOL = 5e-4
TABLE2_SECONDS = 60.0


@dataclass(frozen=True)
class Check:
    entry: str
    check: str
    value: float
    threshold: float
    passed: bool
    note: str = ""

    def row(self) -> dict:
        return asdict(self)


def _check(entry, name, value, threshold, note="", below=True):
    value = float(value)
    ok = bool(np.isfinite(value) and (value < threshold if below else value > threshold))
    return Check(entry, name, value, float(threshold), ok, note)


def _failed(entry, name, threshold, exc):
    return Check(entry, name, math.nan, float(threshold), False, f"{type(exc).__name__}: {exc}")


# --- sinusoidal reference spectrum ---------------------------------------------

def table2_params(kappa):
    return {"m": 1.0, "V0": 0.5, "kappa": float(kappa)}


def table2_reference() -> dict:
    """Reference eigenvalues of the sinusoidal well keyed by (kappa, branch, n)."""
    out = {}
    text = resources.files("tra").joinpath("data/table2_reference.csv").read_text()
    for row in csv.DictReader(text.splitlines()):
        out[(float(row["kappa"]), row["branch"], int(row["n"]))] = float(row["epsilon"])
    return out


def table2_spectrum(kappa, levels=TABLE2_LEVELS):
    """Spectrum objects (positive, negative) for the sinusoidal reference well."""
    from .catalog._dirac import _sin_tra, _sin_window

    p = table2_params(kappa)
    bands = make_bands(*_sin_tra(p))
    out = []
    for br in (Branch.POSITIVE, Branch.NEGATIVE):
        out.append(eigenvalue_scan(bands, _sin_window(p, br, levels - 1), branch=br, levels=levels))
    return out


def check_table2():
    t0 = time.perf_counter()
    reference = table2_reference()
    checks = []
    for kappa in TABLE2_KAPPAS:
        specs = table2_spectrum(kappa)
        for sp in specs:
            for e in sp:
                ref = reference[(kappa, e.branch.value, e.n)]
                checks.append(_check("spin_sinusoidal", f"table2 kappa={kappa} {e.branch.value} n={e.n}",
                                     abs(e.eps - ref), TABLE2_TOL, f"computed {e.eps:.6f}, reference {ref}"))
    checks.append(_check("spin_sinusoidal", "table2 runtime [s]", time.perf_counter() - t0, TABLE2_SECONDS))
    return checks


# --- general oscillator: three routes ---------------------------------------------

def check_general_oscillator(levels=5, tol=1e-6):
    e = cat.get("general_oscillator")
    p = e.parameter_set(Branch.POSITIVE)
    wave, basis = cat.tra_for(e, p)
    bands = make_bands(wave, basis)
    closed = [cat.spectrum(e, p, n, Branch.POSITIVE) for n in range(levels)]
    mp = [general_oscillator_mp_level(p, n) for n in range(levels)]
    hi = closed[-1] + 0.5 * (closed[-1] - closed[-2])
    scan = eigenvalue_scan(bands, (p["m"] + 1e-9, hi), branch=Branch.POSITIVE, levels=levels).values()
    checks = []
    for n in range(levels):
        s = scan[n] if n < len(scan) else math.nan
        checks.append(_check(e.id, f"closed form vs scan n={n}", abs(closed[n] - s), tol))
        checks.append(_check(e.id, f"closed form vs MP condition n={n}", abs(closed[n] - mp[n]), tol))
    return checks


# --- oracle agreement ----------------------------------------------------------------

def check_oracle(entry_id, levels=3, rel_tol=1e-4):
    e = cat.get(entry_id)
    checks = []
    for br in e.branches:
        p = e.parameter_set(br)
        try:
            fd = e.oracle(p, br).run(br).values(br)
            count = cat.level_count(e, p, br)
        except TRAError as exc:
            checks.append(_failed(e.id, f"oracle {br.value}", rel_tol, exc))
            continue
        first = e.first(br)
        for k, n in enumerate(range(first, first + levels)):
            try:
                eps = cat.spectrum(e, p, n, br)
            except InvalidBoundState:
                break
            ref = fd[k] if k < len(fd) else math.nan
            checks.append(_check(e.id, f"oracle {br.value} n={n}", abs(eps - ref) / max(abs(ref), 1e-300), rel_tol))
        if e.finite:
            checks.append(_check(e.id, f"bound-state count {br.value}", abs(count - len(fd)), 0.5,
                                 f"formula {count}, oracle {len(fd)}"))
    return checks


GRAPHENE_ORACLE_ENTRIES = ("graphene_tanh", "graphene_morse", "graphene_hulthen")
FINITE_ENTRIES = ("graphene_tanh", "graphene_morse", "graphene_hulthen", "spin_rosen_morse")


def check_validity(entry_id):
    """Requesting the level just past the formula's count fails exactly where the oracle runs out."""
    e = cat.get(entry_id)
    checks = []
    for br in e.branches:
        p = e.parameter_set(br)
        try:
            fd = e.oracle(p, br).run(br).values(br)
        except TRAError as exc:
            checks.append(_failed(e.id, f"validity {br.value}", 0.5, exc))
            continue
        count = cat.level_count(e, p, br)
        last = e.first(br) + len(fd)
        try:
            cat.spectrum(e, p, last, br)
            rejected = False
        except InvalidBoundState:
            rejected = True
        try:
            cat.spectrum(e, p, last - 1, br)
            accepted = True
        except InvalidBoundState:
            accepted = False
        checks.append(_check(e.id, f"count {br.value}", abs(count - len(fd)), 0.5,
                             f"formula {count}, oracle {len(fd)}"))
        checks.append(_check(e.id, f"n={last} rejected, n={last - 1} accepted {br.value}",
                             float(rejected and accepted), 0.5, below=False))
    return checks


# --- tridiagonality -----------------------------------------------------------------

def check_tridiagonal(entry_id, N=10, tol=1e-8):
    e = cat.get(entry_id)
    checks = []
    if e.tra is None:
        return checks
    for br in e.branches:
        p = e.parameter_set(br)
        for n in sorted({e.first(br), e.first(br) + 1} if e.tra_parity else {e.first(br)}):
            label = f"{br.value} parity={n % 2}" if e.tra_parity else br.value
            try:
                wave, basis = cat.tra_for(e, p, n)
                bands = make_bands(wave, basis)
                eps = cat.spectrum(e, p, n, br)
                spec = bands.spec_at(eps)
                Q = quadrature_matrix(wave, spec, eps, N)
                B = bands.matrix(eps, N)
            except TRAError as exc:
                checks.append(_failed(e.id, f"tridiagonal {label}", tol, exc))
                continue
            scale = np.max(np.abs(B))
            i, j = np.indices(Q.shape)
            far = (np.abs(i - j) == 2) | (np.abs(i - j) == 3)
            near = np.abs(i - j) <= 1
            checks.append(_check(e.id, f"|J_nm|, |n-m| in (2,3) {label}", np.max(np.abs(Q[far])) / scale, tol))
            checks.append(_check(e.id, f"bands vs quadrature {label}", np.max(np.abs(Q[near] - B[near])) / scale, tol))
    return checks


# --- basis orthonormality --------------------------------------------------------------

def registered_bases():
    """(label, BasisSpec) for every entry with a tridiagonal representation, at its first level."""
    out = []
    for e in cat.entries():
        if e.tra is None:
            continue
        for br in e.branches:
            p = e.parameter_set(br)
            for n in ((e.first(br), e.first(br) + 1) if e.tra_parity else (e.first(br),)):
                try:
                    wave, basis = cat.tra_for(e, p, n)
                    spec = make_bands(wave, basis).spec_at(cat.spectrum(e, p, n, br))
                except TRAError:
                    continue
                out.append((f"{e.id} {br.value} n={n}", spec))
    return out


def check_gram(nmax=20, tol=1e-10):
    checks = []
    for label, spec in registered_bases():
        try:
            G = gram_matrix(spec, nmax)
        except TRAError as exc:
            checks.append(_failed(label, "gram", tol, exc))
            continue
        checks.append(_check(label, "gram - identity", np.max(np.abs(G - np.eye(nmax + 1))), tol))
    return checks


# --- spinor residual gate ----------------------------------------------------------------

RESIDUAL_TOL = 1e-6
DETUNED_MIN = 1e-2


def check_residual(entry_id, npts=DEFAULT_POINTS):
    e = cat.get(entry_id)
    checks = []
    for br in e.branches:
        first = e.first(br)
        for n in (first, first + 1):
            try:
                r = catalog_residual(e, None, n, br, npts=npts)
                checks.append(_check(e.id, f"residual {br.value} n={n}", r, RESIDUAL_TOL))
            except TRAError as exc:
                checks.append(_failed(e.id, f"residual {br.value} n={n}", RESIDUAL_TOL, exc))
        try:
            r = catalog_residual(e, None, first, br, eps_shift=0.1, npts=npts)
            checks.append(_check(e.id, f"detuned residual {br.value} n={first}", r, DETUNED_MIN, below=False))
        except TRAError as exc:
            checks.append(_failed(e.id, f"detuned residual {br.value}", DETUNED_MIN, exc))
    return checks


# --- polynomial kernels -------------------------------------------------------------------

def _laguerre_series(n, nu, y):
    """Explicit sum_k binom(n + nu, n - k) (-y)^k / k!, in exact rational arithmetic."""
    nu = Fraction(nu)
    coef = []
    for k in range(n + 1):
        b = Fraction(1)
        for j in range(n - k):
            b = b * (n + nu - j) / (j + 1)
        coef.append(b * (-1) ** k / math.factorial(k))
    out = []
    for v in y:
        fy = Fraction(float(v))
        out.append(float(sum(c * fy ** k for k, c in enumerate(coef))))
    return np.array(out)


def _jacobi_series(n, mu, nu, y):
    """Terminating hypergeometric form of P_n^(mu,nu)(y), in exact rational arithmetic."""
    mu, nu = Fraction(mu), Fraction(nu)
    lead = Fraction(1)
    for j in range(n):
        lead = lead * (mu + 1 + j) / (j + 1)
    coef, t = [], Fraction(1)
    for k in range(n + 1):
        coef.append(t)
        t = t * (k - n) * (n + mu + nu + 1 + k) / ((mu + 1 + k) * (k + 1))
    out = []
    for v in y:
        z = (1 - Fraction(float(v))) / 2
        out.append(float(lead * sum(c * z ** k for k, c in enumerate(coef))))
    return np.array(out)


def check_polynomials(nmax=30):
    checks = []
    y_l = np.linspace(0.05, 12.0, 41)
    y_j = np.linspace(-0.97, 0.97, 41)
    worst_l = worst_j = 0.0
    for nu in (-0.5, 0.0, 0.5, 1.7):
        tab = op.laguerre_table(nmax, nu, y_l)
        for n in range(nmax + 1):
            ref = _laguerre_series(n, nu, y_l)
            worst_l = max(worst_l, np.max(np.abs(tab[n] - ref) / np.maximum(1.0, np.abs(ref))))
    for mu, nu in ((0.5, 0.5), (-0.3, 0.7), (2.2, 1.1)):
        tab = op.jacobi_table(nmax, mu, nu, y_j)
        for n in range(nmax + 1):
            ref = _jacobi_series(n, mu, nu, y_j)
            worst_j = max(worst_j, np.max(np.abs(tab[n] - ref) / np.maximum(1.0, np.abs(ref))))
    checks.append(_check("orthopoly", "laguerre recurrence vs series", worst_l, 1e-11))
    checks.append(_check("orthopoly", "jacobi recurrence vs series", worst_j, 1e-11))

    # orthogonality against the analytic norms
    nq = 2 * 20 + 8
    worst = 0.0
    for nu in (-0.5, 0.5, 2.0):
        x, w = op.gauss_laguerre(nq, nu)
        T = op.laguerre_table(20, nu, x)
        G = (T * w) @ T.T
        norms = np.exp([op.laguerre_log_norm(n, nu) for n in range(21)])
        worst = max(worst, np.max(np.abs(G - np.diag(norms)) / np.sqrt(np.outer(norms, norms))))
    checks.append(_check("orthopoly", "laguerre orthogonality", worst, 1e-10))
    worst = 0.0
    for mu, nu in ((0.5, 0.5), (-0.3, 0.7), (2.2, 1.1)):
        x, w = op.gauss_jacobi(nq, mu, nu)
        T = op.jacobi_table(20, mu, nu, x)
        G = (T * w) @ T.T
        norms = np.exp([op.jacobi_log_norm(n, mu, nu) for n in range(21)])
        worst = max(worst, np.max(np.abs(G - np.diag(norms)) / np.sqrt(np.outer(norms, norms))))
    checks.append(_check("orthopoly", "jacobi orthogonality", worst, 1e-10))

    worst_t = worst_h = 0.0
    for z in (-2.0, -0.4, 0.0, 1.2, 3.5):
        for n in range(nmax + 1):
            worst_t = max(worst_t, float(op.mp_recurrence_residual(n, 0.75, z, 1.0)[0]))
            worst_h = max(worst_h, float(op.mp_recurrence_residual(n, 0.75, z, 0.6, hyperbolic=True)[0]))
    checks.append(_check("orthopoly", "MP recurrence residual (trigonometric)", worst_t, 1e-10))
    checks.append(_check("orthopoly", "MP recurrence residual (hyperbolic)", worst_h, 1e-10))
    return checks


# --- suite ----------------------------------------------------------------------------

CRITERIA = {
    1: ("sinusoidal-well reference spectrum", check_table2),
    2: ("general oscillator: closed form, scan and MP condition", check_general_oscillator),
    3: ("graphene spectra vs finite-difference oracle",
        lambda: [c for eid in GRAPHENE_ORACLE_ENTRIES for c in check_oracle(eid)]),
    4: ("tridiagonality of every representation",
        lambda: [c for e in cat.entries() for c in check_tridiagonal(e.id)]),
    5: ("basis orthonormality", check_gram),
    6: ("spinor residual gate", lambda: [c for eid in cat.ids() for c in check_residual(eid)]),
    7: ("validity enforcement", lambda: [c for eid in FINITE_ENTRIES for c in check_validity(eid)]),
    8: ("polynomial kernels", check_polynomials),
}


def run_suite(criteria=None, entry=None):
    """Run the selected criteria (all by default); ``entry`` restricts per-entry checks."""
    rows = []
    for k in sorted(criteria or CRITERIA):
        if entry is not None:
            per_entry = {3: check_oracle, 4: check_tridiagonal, 6: check_residual, 7: check_validity}
            if k not in per_entry:
                continue
            checks = per_entry[k](entry)
        else:
            checks = CRITERIA[k][1]()
        rows += [(k, c) for c in checks]
    return rows
