"""Bound states from tridiagonal bands, implicit spectrum formulas and a finite-difference oracle."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy import optimize
from scipy.linalg import eigvalsh_tridiagonal

from . import kernels
from .errors import (ConvergenceFailure, GridError, InvalidBoundState, NoRoot, RecursionBreakdown,
                     ResolutionError)

DEFAULT_TOL = 1e-8
N_START = 24
N_MAX = 256
SCAN_POINTS = 2000


class Branch(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class RecursionSeed:
    """Initial values of the expansion coefficients; only f_-1 = 0, f_0 = 1 is allowed."""

    f_minus1: float = 0.0
    f_0: float = 1.0

    def __post_init__(self):
        if (self.f_minus1, self.f_0) != (0.0, 1.0):
            raise ValueError("the recursion seed is fixed at f_-1 = 0, f_0 = 1")


@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    eps: float
    branch: Branch
    N_used: int
    delta: float


@dataclass
class Spectrum:
    """Ordered bound-state energies; ``validity`` holds one flag per entry."""

    entries: list = field(default_factory=list)
    validity: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def branch(self, which) -> list:
        which = Branch(which)
        return [e for e in self.entries if e.branch is which]

    def values(self, which=None) -> np.ndarray:
        ents = self.entries if which is None else self.branch(which)
        return np.array([e.eps for e in ents])

    def level(self, n, which=Branch.POSITIVE) -> SpectrumEntry:
        for e in self.branch(which):
            if e.n == n:
                return e
        raise KeyError(f"no level n={n} on the {Branch(which).value} branch")


def _build(roots, deltas, N_used, branch_override=None):
    """Group roots by branch, order by |eps| (or along the forced branch) and index them."""
    groups: dict = {Branch.POSITIVE: [], Branch.NEGATIVE: []}
    for r, dl, nn in zip(roots, deltas, N_used):
        br = Branch(branch_override) if branch_override else (Branch.POSITIVE if r >= 0 else Branch.NEGATIVE)
        groups[br].append((r, dl, nn))
    entries = []
    for br in (Branch.POSITIVE, Branch.NEGATIVE):
        items = groups[br]
        if branch_override:
            items.sort(key=lambda t: t[0] if br is Branch.POSITIVE else -t[0])
        else:
            items.sort(key=lambda t: abs(t[0]))
        entries += [SpectrumEntry(k, float(r), br, int(nn), float(dl)) for k, (r, dl, nn) in enumerate(items)]
    return Spectrum(entries, [True] * len(entries))


# --- recursion -----------------------------------------------------------------

@dataclass(frozen=True)
class RecursionResult:
    """Scaled coefficients: the true f_n equals ``f[n] * exp(log_scale[n])``."""

    f: np.ndarray
    log_scale: np.ndarray

    def values(self):
        return self.f * np.exp(self.log_scale)

    def __getitem__(self, n):
        return float(self.f[n] * math.exp(self.log_scale[n]))

    def __len__(self):
        return len(self.f)


def recursion_run(bands, eps: float, N: int, seed: RecursionSeed = RecursionSeed(),
                  rescale_every: int = 32) -> RecursionResult:
    """Iterate d_n f_n + c_{n-1} f_{n-1} + c_n f_{n+1} = 0 from the seed up to f_N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    d, c = bands.arrays(eps, N - 1)
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(c))):
        raise ValueError(f"bands are not finite at eps = {eps}")
    try:
        f, logs = kernels.three_term_run(np.ascontiguousarray(d[:N]), np.ascontiguousarray(c[:N]),
                                         seed.f_minus1, seed.f_0, rescale_every)
    except ZeroDivisionError as exc:
        n = exc.args[0] if exc.args else -1
        raise RecursionBreakdown(f"c(n={n}) vanishes at eps = {eps}; the recursion cannot advance") from None
    return RecursionResult(np.asarray(f), np.asarray(logs))


def minor_determinant(bands, eps: float, N: int):
    """(log|D_N|, sign D_N, negative-eigenvalue count) for the (N+1) x (N+1) truncation."""
    d, c = bands.arrays(eps, N)
    neg, logdet, sgn = kernels.tridiag_pivots(np.ascontiguousarray(d), np.ascontiguousarray(c[:N]))
    return logdet, sgn, neg


# --- determinant scan --------------------------------------------------------------

def _count_fn(bands, N):
    def count(e):
        d, c = bands.arrays(e, N)
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(c))):
            return None
        return kernels.tridiag_pivots(np.ascontiguousarray(d), np.ascontiguousarray(c[:N]))[0]
    return count


def _count_grid(count, grid, workers):
    if workers and workers > 1:
        chunks = np.array_split(grid, workers)
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda ch: [count(e) for e in ch], chunks))
        return [v for p in parts for v in p]
    return [count(e) for e in grid]


def _isolate(count, lo, hi, clo, chi, tol, out):
    """Bisection on the Sturm count; intervals holding several roots are split."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        cm = count(mid)
        if cm is None:
            return
        if cm != clo and cm != chi:
            _isolate(count, lo, mid, clo, cm, tol, out)
            _isolate(count, mid, hi, cm, chi, tol, out)
            return
        if cm == clo:
            lo, clo = mid, cm
        else:
            hi, chi = mid, cm
    out.extend([0.5 * (lo + hi)] * abs(chi - clo))


def _scan_roots(bands, lo, hi, N, tol, step, workers):
    count = _count_fn(bands, N)
    npts = max(int(math.ceil((hi - lo) / step)), 2) + 1
    grid = np.linspace(lo, hi, npts)
    counts = _count_grid(count, grid, workers)
    roots: list = []
    for k in range(npts - 1):
        a, b = counts[k], counts[k + 1]
        if a is None or b is None or a == b:
            continue
        _isolate(count, grid[k], grid[k + 1], a, b, tol / 4, roots)
    return sorted(roots)


def _match(prev, new):
    """Pair each new root with the nearest previous one."""
    if not prev:
        return [math.inf] * len(new)
    p = np.asarray(prev)
    return [float(np.min(np.abs(p - r))) for r in new]


def eigenvalue_scan(bands, eps_range: Sequence[float], branch=None, N: int = N_START, tol: float = DEFAULT_TOL,
                    step: float | None = None, n_max: int = N_MAX, levels: int | None = None,
                    workers: int = 1) -> Spectrum:
    """Bound states as zeros of the truncated determinant det J_N(eps) on ``eps_range``.

    Zeros are found through changes in the Sturm count of J_N(eps) on a uniform grid
    (default step: width/2000), refined by bisection to ``tol``; N is doubled until
    every root moves by less than ``tol``. ``levels`` restricts the convergence
    requirement (and the output) to the first few roots of each branch.
    """
    lo, hi = map(float, eps_range)
    if not hi > lo:
        raise GridError("empty energy range")
    sing = getattr(getattr(bands, "wave", None), "singular_eps", None)
    if sing is not None and lo <= sing <= hi:
        raise GridError(f"energy range contains the prefactor singularity eps = {sing}")
    step = step or (hi - lo) / SCAN_POINTS
    history = []
    Ncur = N
    prev = None
    while True:
        roots = _scan_roots(bands, lo, hi, Ncur, tol, step, workers)
        deltas = _match(prev, roots)
        history.append((Ncur, roots))
        keep = _select(roots, branch, levels)
        if keep and all(deltas[i] < tol for i in keep):
            sel_roots = [roots[i] for i in keep]
            spec = _build(sel_roots, [deltas[i] for i in keep], [Ncur] * len(keep), branch)
            return spec
        if not roots and prev is not None and not prev:
            return Spectrum()
        if Ncur >= n_max:
            if not roots:
                return Spectrum()
            conv = [i for i in keep if deltas[i] < tol]
            raise ConvergenceFailure(
                f"{len(keep) - len(conv)} of {len(keep)} roots unconverged at N = {Ncur}",
                diagnostics={"history": history, "deltas": [deltas[i] for i in keep]})
        prev = roots
        Ncur = min(2 * Ncur, n_max)


def _select(roots, branch, levels):
    idx = list(range(len(roots)))
    if branch is not None:
        # the scan range defines the branch; order outward from its threshold
        desc = Branch(branch) is Branch.NEGATIVE
        idx = sorted(idx, key=lambda i: -roots[i] if desc else roots[i])
        return sorted(idx[:levels] if levels is not None else idx)
    if levels is None:
        return idx
    pos = sorted((i for i in idx if roots[i] >= 0), key=lambda i: abs(roots[i]))[:levels]
    neg = sorted((i for i in idx if roots[i] < 0), key=lambda i: abs(roots[i]))[:levels]
    return sorted(pos + neg)


# --- implicit formulas ----------------------------------------------------------------

@dataclass(frozen=True)
class ImplicitFormula:
    """g(eps, n) = lhs - rhs of a spectrum relation plus named validity constraints.

    Each constraint is ``(name, predicate(eps, n) -> bool)``.
    """

    residual: Callable[[float, int], float]
    constraints: tuple = ()
    name: str = ""


def implicit_solve(formula: ImplicitFormula, n: int, bracket: Sequence[float], tol: float = 1e-12) -> float:
    """Root of g(eps, n) on ``bracket`` (bisection with secant steps), validity enforced."""
    a, b = map(float, bracket)
    ga, gb = formula.residual(a, n), formula.residual(b, n)
    if ga == 0:
        root = a
    elif gb == 0:
        root = b
    elif not (np.isfinite(ga) and np.isfinite(gb)) or np.sign(ga) == np.sign(gb):
        raise NoRoot(f"no sign change of {formula.name or 'the residual'} on [{a}, {b}] for n={n}")
    else:
        root = optimize.brentq(lambda e: formula.residual(e, n), a, b, xtol=tol, rtol=4 * np.finfo(float).eps,
                               maxiter=500)
    for cname, pred in formula.constraints:
        if not pred(root, n):
            raise InvalidBoundState(f"root eps = {root} for n={n} violates {cname}", constraint=cname)
    return float(root)


# --- finite-difference oracle ----------------------------------------------------------

def _fd_grid(x_domain, n_points, cutoff):
    a, b = map(float, x_domain)
    a = -cutoff if math.isinf(a) else a
    b = cutoff if math.isinf(b) else b
    if not b > a or n_points < 3:
        raise GridError("finite-difference grid needs a non-empty interval and at least 3 points")
    h = (b - a) / (n_points + 1)
    return a + h * np.arange(1, n_points + 1), h


def _fd_roots(U, E_map, x_domain, eps_range, n_points, cutoff, tol, eps_dependent, step):
    x, h = _fd_grid(x_domain, n_points, cutoff)
    off = np.full(n_points - 1, -0.5 / h ** 2)
    kin = 1.0 / h ** 2
    lo, hi = map(float, eps_range)
    if not eps_dependent:
        diag = kin + np.asarray(U(x, 0.5 * (lo + hi)), dtype=float) * np.ones_like(x)
        Elo, Ehi = E_map(lo), E_map(hi)
        ev = eigvalsh_tridiagonal(diag, off, select="v", select_range=(min(Elo, Ehi) - 1e-9, max(Elo, Ehi) + 1e-9))

        def count(e):
            return int(np.searchsorted(ev, E_map(e)))
    else:
        def count(e):
            diag = kin + np.asarray(U(x, e), dtype=float) * np.ones_like(x) - E_map(e)
            return kernels.tridiag_pivots(np.ascontiguousarray(diag), np.ascontiguousarray(off))[0]

    npts = max(int(math.ceil((hi - lo) / step)), 2) + 1
    grid = np.linspace(lo, hi, npts)
    counts = [count(e) for e in grid]
    roots: list = []
    for k in range(npts - 1):
        if counts[k] != counts[k + 1]:
            _isolate(count, grid[k], grid[k + 1], counts[k], counts[k + 1], tol / 4, roots)
    return sorted(roots)


def fd_schrodinger_oracle(U: Callable, E_map: Callable, x_domain: Sequence[float], eps_range: Sequence[float],
                          n_points: int = 4000, tol: float = 1e-6, cutoff: float = 20.0,
                          eps_dependent: bool | None = None, branch=None, step: float | None = None) -> Spectrum:
    """Energies eps at which -psi''/2 + U(x; eps) psi = E(eps) psi has a Dirichlet solution.

    Three-point differences on ``n_points`` interior nodes (infinite ends cut at
    +/- ``cutoff``; endpoints themselves are never sampled), repeated on the grid with
    half the spacing and Richardson-extrapolated. ``U`` takes ``(x, eps)``.
    """
    lo, hi = map(float, eps_range)
    if eps_dependent is None:
        xs, _ = _fd_grid(x_domain, 64, cutoff)
        eps_dependent = not np.allclose(np.asarray(U(xs, lo)) * np.ones_like(xs),
                                        np.asarray(U(xs, hi)) * np.ones_like(xs), rtol=0, atol=0)
    step = step or (hi - lo) / SCAN_POINTS
    fine_tol = min(tol, 1e-9)
    coarse = _fd_roots(U, E_map, x_domain, eps_range, n_points, cutoff, fine_tol, eps_dependent, step)
    fine = _fd_roots(U, E_map, x_domain, eps_range, 2 * n_points + 1, cutoff, fine_tol, eps_dependent, step)
    if len(coarse) != len(fine):
        raise ResolutionError(f"level count differs between resolutions ({len(coarse)} vs {len(fine)})")
    roots, deltas = [], []
    for rc, rf in zip(coarse, fine):
        shift = abs(rf - rc)
        if shift > 10 * tol:
            raise ResolutionError(f"root near {rf:.8g} moves by {shift:.2e} between resolutions")
        roots.append(rf + (rf - rc) / 3.0)
        deltas.append(shift / 3.0)
    return _build(roots, deltas, [2 * n_points + 1] * len(roots), branch)
