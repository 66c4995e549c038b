"""Potential configurations, symmetry classes and reduction to Schrodinger form.

Potentials are sums of tagged terms drawn from a fixed family registry so the
linearity analysis can reason about them; arbitrary closures are not accepted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidParameter, NotReducible


# Each family: parameter names, value(x, p), derivative(x, p), singular denominator(x, p) or None.
def _den_hulthen(x, p):
    return np.expm1(p["lam"] * x)


def _den_cos(x, p):
    # cos vanishes only approximately at the rounded poles; treat ulp-level values as zero
    c = np.cos(p["lam"] * x)
    return np.where(np.abs(c) <= 4e-16 * (1 + np.abs(p["lam"] * x)), 0.0, c)


def _den_sinh(x, p):
    return np.sinh(p["lam"] * x)


def _power_val(x, p):
    return p["c"] * x ** p["p"] if p["p"] != 0 else p["c"] + 0 * x


def _power_der(x, p):
    return p["c"] * p["p"] * x ** (p["p"] - 1) if p["p"] != 0 else 0 * x


def _den_power(x, p):
    return x if p["p"] < 0 else np.ones_like(x)


_FAMILIES = {
    "zero": ((), lambda x, p: 0 * x, lambda x, p: 0 * x, None),
    "constant": (("c",), lambda x, p: p["c"] + 0 * x, lambda x, p: 0 * x, None),
    "power": (("c", "p"), _power_val, _power_der, _den_power),
    "exponential": (("c", "lam"),
                    lambda x, p: p["c"] * np.exp(-p["lam"] * x),
                    lambda x, p: -p["lam"] * p["c"] * np.exp(-p["lam"] * x), None),
    "tanh": (("c", "lam"),
             lambda x, p: p["c"] * np.tanh(p["lam"] * x),
             lambda x, p: p["c"] * p["lam"] / np.cosh(p["lam"] * x) ** 2, None),
    "sech2": (("c", "lam"),
              lambda x, p: p["c"] / np.cosh(p["lam"] * x) ** 2,
              lambda x, p: -2 * p["c"] * p["lam"] * np.tanh(p["lam"] * x) / np.cosh(p["lam"] * x) ** 2,
              None),
    "hulthen": (("c", "lam"),
                lambda x, p: p["c"] / np.expm1(p["lam"] * x),
                lambda x, p: -p["c"] * p["lam"] * np.exp(p["lam"] * x) / np.expm1(p["lam"] * x) ** 2,
                _den_hulthen),
    "hulthen2": (("c", "lam"),
                 lambda x, p: p["c"] / np.expm1(p["lam"] * x) ** 2,
                 lambda x, p: -2 * p["c"] * p["lam"] * np.exp(p["lam"] * x) / np.expm1(p["lam"] * x) ** 3,
                 _den_hulthen),
    "cosine": (("c", "lam"),
               lambda x, p: p["c"] * np.cos(p["lam"] * x),
               lambda x, p: -p["c"] * p["lam"] * np.sin(p["lam"] * x), None),
    "tan": (("c", "lam"),
            lambda x, p: p["c"] * np.tan(p["lam"] * x),
            lambda x, p: p["c"] * p["lam"] / np.cos(p["lam"] * x) ** 2, _den_cos),
    "sec2": (("c", "lam"),
             lambda x, p: p["c"] / np.cos(p["lam"] * x) ** 2,
             lambda x, p: 2 * p["c"] * p["lam"] * np.tan(p["lam"] * x) / np.cos(p["lam"] * x) ** 2,
             _den_cos),
    "coth": (("c", "lam"),
             lambda x, p: p["c"] / np.tanh(p["lam"] * x),
             lambda x, p: -p["c"] * p["lam"] / np.sinh(p["lam"] * x) ** 2, _den_sinh),
    "csch2": (("c", "lam"),
              lambda x, p: p["c"] / np.sinh(p["lam"] * x) ** 2,
              lambda x, p: -2 * p["c"] * p["lam"] * np.cosh(p["lam"] * x) / np.sinh(p["lam"] * x) ** 3,
              _den_sinh),
}

FAMILY_NAMES = tuple(_FAMILIES)


@dataclass(frozen=True)
class Term:
    """One registered family with its parameters, e.g. ``Term("tanh", c=2, lam=1)``."""

    family: str
    params: tuple = ()

    def __init__(self, family, **params):
        if family not in _FAMILIES:
            raise InvalidParameter(f"unknown potential family {family!r}")
        names = _FAMILIES[family][0]
        if set(params) != set(names):
            raise InvalidParameter(f"family {family!r} takes parameters {names}, got {sorted(params)}")
        if "lam" in params and params["lam"] == 0:
            raise InvalidParameter(f"family {family!r} needs lam != 0")
        if family == "power" and int(params["p"]) != params["p"]:
            raise InvalidParameter("power family needs an integer exponent")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", tuple((k, float(params[k])) for k in names))

    @property
    def p(self):
        return dict(self.params)

    def _check(self, x):
        den = _FAMILIES[self.family][3]
        if den is not None:
            bad = np.asarray(den(x, self.p)) == 0
            if np.any(bad):
                raise DomainError(f"{self.family} term is singular at x={np.asarray(x)[bad] if np.ndim(x) else x}")

    def value(self, x):
        x = np.asarray(x, dtype=float)
        self._check(x)
        return _FAMILIES[self.family][1](x, self.p)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        self._check(x)
        return _FAMILIES[self.family][2](x, self.p)

    def scaled(self, s):
        p = self.p
        if "c" not in p:
            return self
        p["c"] *= s
        return Term(self.family, **p)

    def singular_points(self, lo=-math.inf, hi=math.inf):
        """Singular points inside [lo, hi] (periodic families are enumerated)."""
        p = self.p
        if self.family == "power" and p["p"] < 0 or self.family in ("hulthen", "hulthen2", "coth", "csch2"):
            return [0.0] if lo <= 0 <= hi else []
        if self.family in ("tan", "sec2"):
            step = math.pi / abs(p["lam"])
            if not (math.isfinite(lo) and math.isfinite(hi)):
                return [0.5 * step]
            k0 = math.ceil(lo / step - 0.5)
            return [(k + 0.5) * step for k in range(k0, int(math.floor(hi / step - 0.5)) + 1)]
        return []

    def __str__(self):
        args = ", ".join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.family}({args})"


@dataclass(frozen=True)
class Potential:
    """Sum of registered terms; the empty sum is the zero potential."""

    terms: tuple = ()

    @classmethod
    def of(cls, *terms):
        """Sum of terms; nested potentials are flattened."""
        flat = []
        for t in terms:
            flat.extend(t.terms if isinstance(t, Potential) else (t,))
        return cls(tuple(t for t in flat if t.family != "zero"))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for t in self.terms:
            out = out + t.value(x)
        return out

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for t in self.terms:
            out = out + t.derivative(x)
        return out

    def __add__(self, other):
        return Potential(self.terms + other.terms)

    def __neg__(self):
        return self.scaled(-1.0)

    def scaled(self, s):
        return Potential(tuple(t.scaled(s) for t in self.terms))

    def singular_points(self, lo=-math.inf, hi=math.inf):
        pts = sorted({p for t in self.terms for p in t.singular_points(lo, hi)})
        return pts

    def __str__(self):
        return " + ".join(str(t) for t in self.terms) or "0"


ZERO = Potential()


# convenience constructors
def constant(c):
    return Potential.of(Term("constant", c=c))


def power(c, p):
    return Potential.of(Term("power", c=c, p=p))


def quadratic(c):
    return power(c, 2)


def exponential(c, lam):
    return Potential.of(Term("exponential", c=c, lam=lam))


def family(name, **params):
    return Potential.of(Term(name, **params))


class SymmetryClass(str, Enum):
    SPIN_SYMMETRIC = "spin_symmetric"
    PSEUDOSPIN_SYMMETRIC = "pseudospin_symmetric"
    SCALAR_ONLY = "scalar_only"
    PSEUDOSCALAR_ONLY = "pseudoscalar_only"
    GENERAL = "general"


@dataclass(frozen=True)
class PotentialConfig:
    """Mass and the potentials S, V, W (and optionally U) on an x-interval.

    ``U`` must be removed with :meth:`ingest` before the configuration is used.
    """

    m: float
    S: Potential = ZERO
    V: Potential = ZERO
    W: Potential = ZERO
    domain: tuple = (-math.inf, math.inf)
    U: Potential | None = None

    def ingest(self, x0=0.0):
        """Drop U, returning the gauge-free config and the phase function."""
        from .basis import gauge_away

        U = self.U
        cfg = PotentialConfig(self.m, self.S, self.V, self.W, self.domain, None)
        if U is None:
            return cfg, lambda x: 0.0 * np.asarray(x, dtype=float)
        return cfg, lambda x: gauge_away(U, x0, x)

    def probe_grid(self, npts=97):
        lo, hi = self.domain
        lo = max(lo, -8.0)
        hi = min(hi, 8.0)
        x = np.linspace(lo, hi, npts + 2)[1:-1]
        bad = set()
        for pot in (self.S, self.V, self.W):
            bad.update(pot.singular_points(lo, hi))
        keep = np.ones(x.size, bool)
        for b in bad:
            keep &= np.abs(x - b) > 1e-6
        return x[keep]


def _same(f, g, x):
    a, b = f(x), g(x)
    return bool(np.all(np.abs(a - b) <= 1e-12 * (1 + np.abs(a) + np.abs(b))))


def classify(config: PotentialConfig) -> SymmetryClass:
    """Most specific symmetry class, decided pointwise on a probe grid."""
    x = config.probe_grid()
    zero = lambda t: 0 * t
    S_zero = _same(config.S, zero, x)
    V_zero = _same(config.V, zero, x)
    W_zero = _same(config.W, zero, x)
    if V_zero and W_zero:
        return SymmetryClass.SCALAR_ONLY
    if S_zero and V_zero:
        return SymmetryClass.PSEUDOSCALAR_ONLY
    if _same(config.V, config.S, x):
        return SymmetryClass.SPIN_SYMMETRIC
    if _same(config.V, lambda t: -config.S(t), x):
        return SymmetryClass.PSEUDOSPIN_SYMMETRIC
    return SymmetryClass.GENERAL


@dataclass(frozen=True)
class EffectiveSchrodinger:
    """-1/2 psi'' + U(x; eps) psi = E(eps) psi with U = u0 + c1(eps) u1.

    ``component`` names the spinor component that obeys the equation and
    ``sign`` the branch of the supersymmetric pair (+ means F^2 + F').
    """

    u0: Callable
    u1: Callable
    c1: Callable
    energy: Callable
    component: str
    sign: str
    symmetry: SymmetryClass
    domain: tuple = (-math.inf, math.inf)

    def U(self, x, eps):
        return self.u0(x) + self.c1(eps) * self.u1(x)

    def E(self, eps):
        return self.energy(eps)


def reduce(config: PotentialConfig, cls: SymmetryClass | None = None, sign="+") -> EffectiveSchrodinger:
    """Effective Schrodinger problem for a symmetric configuration.

    ScalarOnly uses F = m + S with U = (F^2 +- F')/2 and E = eps^2/2; the "+"
    branch governs the upper component of the off-diagonal (Weyl) form.
    PseudoscalarOnly uses W in place of F and E = (eps^2 - m^2)/2; its "-"
    branch governs the upper component.
    """
    if cls is None:
        cls = classify(config)
    if sign not in ("+", "-"):
        raise InvalidParameter("sign must be '+' or '-'")
    s = 1.0 if sign == "+" else -1.0
    m = config.m
    zero = lambda x: 0.0 * np.asarray(x, dtype=float)
    dom = config.domain
    if cls is SymmetryClass.SCALAR_ONLY:
        S = config.S
        u0 = lambda x: 0.5 * ((m + S(x)) ** 2 + s * S.derivative(x))
        return EffectiveSchrodinger(u0, zero, lambda e: 0.0, lambda e: 0.5 * e * e,
                                    "upper" if s > 0 else "lower", sign, cls, dom)
    if cls is SymmetryClass.PSEUDOSCALAR_ONLY:
        W = config.W
        u0 = lambda x: 0.5 * (W(x) ** 2 + s * W.derivative(x))
        return EffectiveSchrodinger(u0, zero, lambda e: 0.0, lambda e: 0.5 * (e * e - m * m),
                                    "lower" if s > 0 else "upper", sign, cls, dom)
    if cls is SymmetryClass.SPIN_SYMMETRIC:
        W, V = config.W, config.V
        u0 = lambda x: 0.5 * (W(x) ** 2 - W.derivative(x))
        return EffectiveSchrodinger(u0, V, lambda e: e + m, lambda e: 0.5 * (e * e - m * m),
                                    "upper", "-", cls, dom)
    if cls is SymmetryClass.PSEUDOSPIN_SYMMETRIC:
        W, V = config.W, config.V
        u0 = lambda x: 0.5 * (W(x) ** 2 + W.derivative(x))
        return EffectiveSchrodinger(u0, V, lambda e: e - m, lambda e: 0.5 * (e * e - m * m),
                                    "lower", "+", cls, dom)
    raise NotReducible("no spin, pseudospin, scalar or pseudoscalar symmetry; use the J-matrix route")
