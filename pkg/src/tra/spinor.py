"""Two-component spinors: lower-component generation, normalization and the Dirac residual."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import trapezoid

from .errors import DomainError, GridError, InvalidParameter, SingularCoupling, ZeroField
from .potentials import PotentialConfig

DEFAULT_POINTS = 4096
ENVELOPE_FLOOR = 1e-10
_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class SpinorField:
    """Samples of (upper, lower) on a strictly increasing grid.

    ``frame`` is "dirac" for the (psi+, psi-) components or "weyl" for the
    off-diagonal graphene form (chi+, chi-).
    """

    grid: np.ndarray
    upper: np.ndarray
    lower: np.ndarray
    eps: float
    norm: float
    frame: str = "dirac"

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.ndim != 1 or g.size < 16:
            raise GridError("a spinor grid needs at least 16 points")
        if np.any(np.diff(g) <= 0):
            raise GridError("grid must be strictly increasing")
        if self.frame not in ("dirac", "weyl"):
            raise InvalidParameter(f"unknown frame {self.frame!r}")
        if not np.isfinite(self.norm):
            raise GridError("spinor norm is not finite")


def _norm(grid, up, lo):
    return float(trapezoid(up * up + lo * lo, grid))


def _five_point(f, x, h):
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def _rule_derivative(rule, x, h):
    d = getattr(rule, "derivative", None)
    if d is not None:
        return np.asarray(d(x), dtype=float)
    return _five_point(lambda t: np.asarray(rule(t), dtype=float), x, h)


def _check_denominator(den, grid, what):
    den = np.asarray(den, dtype=float) * np.ones_like(grid)
    scale = max(1.0, float(np.max(np.abs(den))))
    bad = np.abs(den) <= 1e-12 * scale
    flips = np.nonzero(np.sign(den[:-1]) * np.sign(den[1:]) < 0)[0]
    if np.any(bad) or flips.size:
        locs = sorted(set(grid[bad].tolist()) | set((0.5 * (grid[flips] + grid[flips + 1])).tolist()))
        raise SingularCoupling(f"{what} vanishes on the grid near x = {locs[:5]}")
    return den


def default_grid(rule: Callable, domain=(-math.inf, math.inf), npts=DEFAULT_POINTS, floor=ENVELOPE_FLOOR):
    """Uniform grid covering where |rule| exceeds ``floor`` times its peak.

    Infinite sides are explored by doubling; finite ends are kept a small step inside.
    """
    lo, hi = (float(domain[0]), float(domain[1]))
    a = lo if math.isfinite(lo) else (hi - 2.0 if math.isfinite(hi) else -2.0)
    b = hi if math.isfinite(hi) else (lo + 2.0 if math.isfinite(lo) else 2.0)

    def sample(a, b, k=4001):
        pad = 1e-9 * (b - a)
        x = np.linspace(a + (pad if math.isfinite(lo) and a == lo else 0.0),
                        b - (pad if math.isfinite(hi) and b == hi else 0.0), k)
        with np.errstate(all="ignore"):
            v = np.abs(np.asarray(rule(x), dtype=float))
        return x, np.where(np.isfinite(v), v, 0.0)

    for _ in range(60):
        x, v = sample(a, b)
        peak = v.max()
        if peak == 0:
            a = a - (b - a) if not math.isfinite(lo) else a
            b = b + (b - a) if not math.isfinite(hi) else b
            continue
        grow = False
        if not math.isfinite(lo) and v[0] > floor * peak:
            a -= (b - a)
            grow = True
        if not math.isfinite(hi) and v[-1] > floor * peak:
            b += (b - a)
            grow = True
        if not grow:
            break
    else:
        raise GridError("wavefunction envelope does not decay")
    if peak == 0:
        raise ZeroField("wavefunction vanishes on every probe point")
    x, v = sample(a, b, 40001)
    idx = np.nonzero(v > floor * v.max())[0]
    x0, x1 = x[max(idx[0] - 1, 0)], x[min(idx[-1] + 1, x.size - 1)]
    # leave one spacing at a finite boundary so derivative stencils stay inside
    pad = (x1 - x0) / npts
    if math.isfinite(lo):
        x0 = max(x0, lo + pad)
    if math.isfinite(hi):
        x1 = min(x1, hi - pad)
    return np.linspace(x0, x1, npts)


def assemble(rule: Callable, config: PotentialConfig, eps: float, grid=None, component="upper",
             frame="dirac", balance="exact", eta=1.0) -> SpinorField:
    """Sample the given component and build the other one from the first-order relation.

    Dirac frame: psi- = (W + d/dx) psi+ / (eps + m + S - V), or, when the rule is
    the lower component, psi+ = (W - d/dx) psi- / (eps - m - S - V).
    Weyl frame (S only, m = k): chi-+ = (-+d/dx + m + S) chi+- / eps.
    With ``balance="kinetic"`` the lower component is eta (W + d/dx) psi+ / (eps + m)
    instead, which is what a basis projection with that relation assumes.
    """
    if component not in ("upper", "lower"):
        raise InvalidParameter("component must be 'upper' or 'lower'")
    if grid is None:
        grid = default_grid(rule, config.domain)
    grid = np.asarray(grid, dtype=float)
    if grid.size < 5:
        raise GridError("grid too short")
    h = 0.25 * float(np.min(np.diff(grid)))
    f = np.asarray(rule(grid), dtype=float) * np.ones_like(grid)
    df = _rule_derivative(rule, grid, h) * np.ones_like(grid)
    m, S, V, W = config.m, config.S(grid), config.V(grid), config.W(grid)
    sgn = 1.0 if component == "upper" else -1.0
    if frame == "weyl":
        if eps == 0:
            raise SingularCoupling("eps = 0: the Weyl-frame partner is undefined")
        other = (-sgn * df + (m + S) * f) / eps
    elif frame == "dirac" and balance == "kinetic":
        if component != "upper":
            raise InvalidParameter("kinetic balance builds the lower component from the upper one")
        den = _check_denominator(eps + m, grid, "eps + m")
        other = eta * (W * f + df) / den
    elif frame == "dirac":
        if component == "upper":
            den = _check_denominator(eps + m + S - V, grid, "eps + m + S - V")
            other = (W * f + df) / den
        else:
            den = _check_denominator(eps - m - S - V, grid, "eps - m - S - V")
            other = (W * f - df) / den
    else:
        raise InvalidParameter(f"unknown frame {frame!r}")
    up, lo = (f, other) if component == "upper" else (other, f)
    return SpinorField(grid, up, lo, float(eps), _norm(grid, up, lo), frame)


def normalize(field: SpinorField) -> SpinorField:
    if not field.norm > 0:
        raise ZeroField("cannot normalize a field with zero norm")
    s = 1.0 / math.sqrt(field.norm)
    up, lo = field.upper * s, field.lower * s
    return SpinorField(field.grid, up, lo, field.eps, _norm(field.grid, up, lo), field.frame)


def to_dirac(field: SpinorField) -> SpinorField:
    """Weyl (chi) frame to Dirac (psi) frame: psi = (1/sqrt 2) [[1, 1], [1, -1]] chi."""
    if field.frame == "dirac":
        return field
    up = _SQRT_HALF * (field.upper + field.lower)
    lo = _SQRT_HALF * (field.upper - field.lower)
    return SpinorField(field.grid, up, lo, field.eps, _norm(field.grid, up, lo), "dirac")


def _uniform_step(grid):
    d = np.diff(grid)
    h = float(d.mean())
    if np.max(np.abs(d - h)) > 1e-9 * h:
        raise GridError("residual needs a uniform grid")
    return h


def _d1(f, h):
    return (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)


def _d2(f, h):
    return (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)


def _rms(a):
    return float(np.sqrt(np.mean(a * a)))


def dirac_residual(field: SpinorField, config: PotentialConfig) -> float:
    """RMS of |(H - eps) psi| over interior points divided by the RMS of |psi|."""
    field = to_dirac(field)
    x = field.grid
    h = _uniform_step(x)
    up, lo = field.upper, field.lower
    xi = x[2:-2]
    m, S, V, W = config.m, config.S(xi), config.V(xi), config.W(xi)
    u, l = up[2:-2], lo[2:-2]
    r1 = (m + S + V - field.eps) * u + W * l - _d1(lo, h)
    r2 = _d1(up, h) + W * u + (-m - S + V - field.eps) * l
    scale = math.sqrt(_rms(u) ** 2 + _rms(l) ** 2)
    if scale == 0:
        raise ZeroField("residual of a zero field is undefined")
    return math.sqrt(_rms(r1) ** 2 + _rms(r2) ** 2) / scale


def schrodinger_residual(grid, psi, U: Callable, E: float) -> float:
    """RMS of |-psi''/2 + (U - E) psi| over interior points divided by the RMS of |psi|."""
    x = np.asarray(grid, dtype=float)
    h = _uniform_step(x)
    psi = np.asarray(psi, dtype=float)
    xi = x[2:-2]
    r = -0.5 * _d2(psi, h) + (U(xi) - E) * psi[2:-2]
    scale = _rms(psi[2:-2])
    if scale == 0:
        raise ZeroField("residual of a zero field is undefined")
    return _rms(r) / scale


# --- catalog glue ----------------------------------------------------------------

def catalog_field(entry, params=None, n=0, branch="positive", grid=None, eps_shift=0.0,
                  npts=DEFAULT_POINTS):
    """Normalized spinor (or, for Schrodinger-level entries, the sampled state) of a catalog level."""
    from . import catalog as cat

    entry = cat.get(entry)
    lvl = cat.resolve(entry, params, n, branch)
    p = entry.check_params(params if params is not None else entry.parameter_set(lvl.branch))
    rule = entry.upper(p, lvl)
    if entry.frame == "schrodinger":
        x = grid if grid is not None else default_grid(rule, _schrodinger_domain(entry, p), npts)
        return lvl, x, np.asarray(rule(x), dtype=float)
    cfg = entry.config(p)
    if grid is None:
        grid = default_grid(rule, cfg.domain, npts)
    field = assemble(rule, cfg, lvl.eps + eps_shift, grid, entry.component, entry.frame,
                     entry.balance, float(p.get("eta", 1.0)))
    return lvl, normalize(field), cfg


def _schrodinger_domain(entry, p):
    o = entry.oracle(p, None)
    lo, hi = o.x_domain
    lo = -math.inf if lo < -1e3 else lo
    return (lo, hi)


def catalog_residual(entry, params=None, n=0, branch="positive", grid=None, eps_shift=0.0,
                     npts=DEFAULT_POINTS) -> float:
    """Residual of a catalog level: Dirac residual, or the Schrodinger one for plain wells."""
    from . import catalog as cat

    entry = cat.get(entry)
    if entry.frame == "schrodinger":
        lvl, x, psi = catalog_field(entry, params, n, branch, grid, npts=npts)
        o = entry.oracle(entry.check_params(params if params is not None else entry.parameter_set(lvl.branch)), None)
        return schrodinger_residual(x, psi, lambda t: o.U(t, lvl.eps), o.E(lvl.eps + eps_shift))
    lvl, field, cfg = catalog_field(entry, params, n, branch, grid, eps_shift, npts)
    return dirac_residual(field, cfg)
