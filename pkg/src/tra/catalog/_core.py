"""Catalog data model, registry and the generic spectrum / wavefunction operations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import InvalidBoundState, InvalidParameter, MissingParameter, MissingSpectrum, NoRoot, UnknownEntry
from ..potentials import PotentialConfig, SymmetryClass
from ..solver import Branch, ImplicitFormula, implicit_solve

MAX_LEVELS = 200


@dataclass(frozen=True)
class Level:
    """A resolved bound state with the auxiliary quantities evaluated at its energy."""

    n: int
    eps: float
    branch: Branch
    derived: dict = field(default_factory=dict)


@dataclass(frozen=True)
class OracleSetup:
    """Reduced Schrodinger problem handed to the finite-difference oracle."""

    U: Callable
    E: Callable
    x_domain: tuple
    eps_range: tuple
    n_points: int = 4000
    eps_dependent: bool | None = None
    tol: float = 1e-5

    def run(self, branch=None):
        from ..solver import fd_schrodinger_oracle
        return fd_schrodinger_oracle(self.U, self.E, self.x_domain, self.eps_range, n_points=self.n_points,
                                     tol=self.tol, eps_dependent=self.eps_dependent, branch=branch)


@dataclass(frozen=True)
class CatalogEntry:
    """One solvable configuration.

    ``solve(p, n, branch)`` returns a :class:`Level` or raises InvalidBoundState;
    ``upper(p, level)`` returns a callable of x. ``component`` tells which spinor
    component that callable represents and ``frame`` whether it lives in the
    Dirac frame, the Weyl (graphene) frame or is a plain Schrodinger state.
    ``balance="kinetic"`` marks levels of the projected equation, whose lower
    component is built as eta (W + d/dx) psi+ / (eps + m).
    """

    id: str
    symmetry: SymmetryClass | None
    params: tuple
    defaults: dict
    description: str
    solve: Callable
    upper: Callable
    config: Callable | None = None
    oracle: Callable | None = None
    tra: Callable | None = None
    closed_form: Callable | None = None
    branches: tuple = (Branch.POSITIVE,)
    branch_overrides: dict = field(default_factory=dict)
    finite: bool = False
    component: str = "upper"
    frame: str = "dirac"
    first_level: int | dict = 0
    tra_parity: bool = False
    balance: str = "exact"
    notes: str = ""

    def first(self, branch=Branch.POSITIVE) -> int:
        """Lowest level index on a branch (n below it is a zero mode or absent)."""
        if isinstance(self.first_level, dict):
            return int(self.first_level.get(Branch(branch), 0))
        return int(self.first_level)

    def parameter_set(self, branch=Branch.POSITIVE) -> dict:
        p = dict(self.defaults)
        p.update(self.branch_overrides.get(Branch(branch), {}))
        return p

    def check_params(self, params) -> dict:
        unknown = set(params) - set(self.params)
        if unknown:
            raise InvalidParameter(f"{self.id}: unknown parameter(s) {sorted(unknown)}; expected {list(self.params)}")
        missing = [k for k in self.params if k not in params]
        if missing:
            raise MissingParameter(f"{self.id}: missing parameter(s) {missing}")
        return {k: float(params[k]) for k in self.params}


_REGISTRY: dict = {}


def register(entry: CatalogEntry) -> CatalogEntry:
    if entry.id in _REGISTRY:
        raise ValueError(f"duplicate catalog id {entry.id}")
    _REGISTRY[entry.id] = entry
    return entry


def get(entry_id) -> CatalogEntry:
    if isinstance(entry_id, CatalogEntry):
        return entry_id
    try:
        return _REGISTRY[entry_id]
    except KeyError:
        raise UnknownEntry(entry_id, sorted(_REGISTRY)) from None


def entries() -> list:
    return list(_REGISTRY.values())


def ids() -> list:
    return sorted(_REGISTRY)


# --- operations -----------------------------------------------------------------

def resolve(entry, params=None, n=0, branch=Branch.POSITIVE) -> Level:
    """Solve the spectrum relation for level n, then evaluate the derived parameters."""
    entry = get(entry)
    branch = Branch(branch)
    if branch not in entry.branches:
        raise InvalidBoundState(f"{entry.id} has no {branch.value} branch", constraint="branch")
    p = entry.check_params(params if params is not None else entry.parameter_set(branch))
    if int(n) != n or n < 0:
        raise InvalidParameter("level index must be a non-negative integer")
    if n < entry.first(branch):
        raise InvalidBoundState(f"{entry.id}: levels on the {branch.value} branch start at n={entry.first(branch)}",
                                constraint="n >= first level")
    return entry.solve(p, int(n), branch)


def spectrum(entry, params=None, n=0, branch=Branch.POSITIVE) -> float:
    return resolve(entry, params, n, branch).eps


def level_count(entry, params=None, branch=Branch.POSITIVE):
    """Number of bound states on a branch; ``None`` for infinite spectra."""
    entry = get(entry)
    if not entry.finite:
        return None
    count = 0
    start = entry.first(branch)
    for n in range(start, start + MAX_LEVELS):
        try:
            resolve(entry, params, n, branch)
        except (InvalidBoundState, NoRoot):
            break
        count += 1
    return count


def wavefunction_upper(entry, params, n, x, eps=None, branch=Branch.POSITIVE, level: Level | None = None):
    """Value of the catalog wavefunction (upper component, or lower where the entry says so)."""
    entry = get(entry)
    if level is None:
        if eps is None:
            raise MissingSpectrum(f"{entry.id}: level n={n} must be resolved before building its wavefunction")
        level = resolve(entry, params, n, branch)
        if abs(level.eps - eps) > 1e-8 * max(1.0, abs(eps)):
            raise MissingSpectrum(f"{entry.id}: eps={eps} is not the resolved level n={n} ({level.eps})")
    p = entry.check_params(params if params is not None else entry.parameter_set(level.branch))
    return entry.upper(p, level)(np.asarray(x, dtype=float))


# --- helpers used by the entry definitions ------------------------------------------

def explicit_level(eps2, n, branch, derived=None, constraint="bound state"):
    """Level from an explicit eps^2 value; the sign follows the branch."""
    if not np.isfinite(eps2) or eps2 <= 0:
        raise InvalidBoundState(f"eps^2 = {eps2} is not positive for n={n}", constraint=constraint)
    eps = math.sqrt(eps2) if Branch(branch) is Branch.POSITIVE else -math.sqrt(eps2)
    return Level(n, eps, Branch(branch), derived or {})


def bracketed_root(g, n, lo, hi, constraints=(), name="", npts=800, from_hi=False):
    """First sign change of g(eps, n) on [lo, hi] (scanning from ``lo`` or ``hi``), refined by implicit_solve."""
    grid = np.linspace(lo, hi, npts)
    if from_hi:
        grid = grid[::-1]
    with np.errstate(all="ignore"):
        vals = [g(e, n) for e in grid]
    for k in range(npts - 1):
        a, b = vals[k], vals[k + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if a == 0.0 or np.sign(a) != np.sign(b):
            br = sorted((grid[k], grid[k + 1]))
            return implicit_solve(ImplicitFormula(g, tuple(constraints), name), n, br)
    raise NoRoot(f"{name or 'relation'}: no root for n={n} on [{lo}, {hi}]")


def valid_root(g, n, lo, hi, constraints=(), name="", npts=600, from_hi=False):
    """First root of g on [lo, hi] (in scan order) that satisfies every constraint.

    Raises InvalidBoundState with the first violated constraint when roots exist
    but none is valid, NoRoot when there is no sign change at all.
    """
    grid = np.linspace(lo, hi, npts)
    if from_hi:
        grid = grid[::-1]
    with np.errstate(all="ignore"):
        vals = np.array([g(e, n) for e in grid], dtype=float)
    rejected = None
    form = ImplicitFormula(g, tuple(constraints), name)
    for k in range(npts - 1):
        a, b = vals[k], vals[k + 1]
        if not (np.isfinite(a) and np.isfinite(b)) or (a != 0.0 and np.sign(a) == np.sign(b)):
            continue
        try:
            return implicit_solve(form, n, sorted((grid[k], grid[k + 1])))
        except InvalidBoundState as exc:
            rejected = rejected or exc
    if rejected is not None:
        raise rejected
    raise NoRoot(f"{name or 'relation'}: no root for n={n} on [{lo}, {hi}]")


def tra_for(entry, params, n=0):
    """(wave operator, basis) for level n; parity-split entries pick the basis by n."""
    entry = get(entry)
    if entry.tra is None:
        raise InvalidParameter(f"{entry.id} has no tridiagonal representation")
    if entry.tra_parity:
        return entry.tra(params, "odd" if n % 2 else "even")
    return entry.tra(params)


def require(cond, message, constraint):
    if not cond:
        raise InvalidBoundState(message, constraint=constraint)


def config_check(entry, p) -> PotentialConfig:
    if entry.config is None:
        raise InvalidParameter(f"{entry.id} is a Schrodinger-level entry without a Dirac configuration")
    return entry.config(p)
