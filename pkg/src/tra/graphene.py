"""Magnetic barriers in graphene: field profile -> vector potential -> scalar coupling, and Landau levels.

Electrons in graphene under a static field B(x) along z obey a massless Dirac-Weyl
equation. In the gauge A = (0, A_y(x), 0) the transverse wavenumber k plays the role of
a mass and S(x) = (e/c hbar) A_y(x) that of a scalar potential, so each profile maps to
a scalar-only catalog entry. Energies are E = hbar v_F eps.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import catalog as cat
from .errors import InvalidBoundState, InvalidProfile
from .potentials import Potential, PotentialConfig, family
from .solver import Branch


class Family(enum.Enum):
    CONSTANT = "constant"
    INVERSE_SQUARE = "inverse_square"
    COSH_BARRIER = "cosh_barrier"
    EXP_DECAY = "exp_decay"
    HULTHEN = "hulthen"
    SEC_SQUARED = "sec_squared"
    SINH_SQUARED = "sinh_squared"


@dataclass(frozen=True)
class Scales:
    """Unit factors; ``charge`` is e/(c hbar). All default to 1 (internal units)."""

    hbar: float = 1.0
    v_F: float = 1.0
    charge: float = 1.0

    @property
    def energy(self) -> float:
        return self.hbar * self.v_F


@dataclass(frozen=True)
class FieldProfile:
    """A magnetic field profile B(x) with amplitude ``B0``, rate ``alpha`` and wavenumber ``k``.

    ``alpha`` is the decay or period parameter of the family (ignored by the constant
    and inverse-square fields).
    """

    family: Family
    B0: float
    alpha: float = 1.0
    k: float = 0.0
    scales: Scales = field(default_factory=Scales)

    def __post_init__(self):
        try:
            object.__setattr__(self, "family", Family(self.family))
        except ValueError:
            raise InvalidProfile(f"unknown field family {self.family!r}; "
                                 f"expected one of {[f.value for f in Family]}") from None
        for name in ("B0", "alpha", "k"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidProfile(f"{name} must be finite")
        if self.family not in (Family.CONSTANT, Family.INVERSE_SQUARE) and not self.alpha > 0:
            raise InvalidProfile(f"{self.family.value}: alpha must be positive")
        s = self.scales
        if not (s.hbar > 0 and s.v_F > 0 and s.charge > 0):
            raise InvalidProfile("unit scales must be positive")

    def field(self, x):
        """B(x) sampled at ``x``."""
        x = np.asarray(x, dtype=float)
        a, B0 = self.alpha, self.B0
        f = self.family
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if f is Family.CONSTANT:
                return np.full_like(x, B0)
            if f is Family.INVERSE_SQUARE:
                return B0 / (x * x)
            if f is Family.COSH_BARRIER:
                return B0 / np.cosh(a * x) ** 2
            if f is Family.EXP_DECAY:
                return B0 * np.exp(-a * x)
            if f is Family.HULTHEN:
                return B0 * np.exp(a * x) / np.expm1(a * x) ** 2
            if f is Family.SEC_SQUARED:
                return B0 / np.cos(a * x) ** 2
            return B0 / np.sinh(a * x) ** 2

    # amplitude of S and the catalog entry it maps to
    def amplitude(self) -> float:
        q, a, B0 = self.scales.charge, self.alpha, self.B0
        return {
            Family.CONSTANT: q * B0,
            Family.INVERSE_SQUARE: -q * B0,
            Family.COSH_BARRIER: q * B0 / a,
            Family.EXP_DECAY: -q * B0 / a,
            Family.HULTHEN: -q * B0 / a,
            Family.SEC_SQUARED: q * B0 / a,
            Family.SINH_SQUARED: -q * B0 / a,
        }[self.family]

    def entry_id(self) -> str:
        return _ENTRY[self.family]

    def entry_params(self) -> dict:
        s = self.amplitude()
        if self.family in (Family.CONSTANT, Family.INVERSE_SQUARE):
            return {"k": self.k, "gamma": s}
        if self.family in (Family.SEC_SQUARED, Family.SINH_SQUARED):
            return {"k": self.k, "S0": s, "lam": self.alpha}
        return {"k": self.k, "S0": s, "alpha": self.alpha}


_ENTRY = {
    Family.CONSTANT: "graphene_constant",
    Family.INVERSE_SQUARE: "graphene_inverse_square",
    Family.COSH_BARRIER: "graphene_tanh",
    Family.EXP_DECAY: "graphene_morse",
    Family.HULTHEN: "graphene_hulthen",
    Family.SEC_SQUARED: "graphene_sec2",
    Family.SINH_SQUARED: "graphene_sinh2",
}

_DOMAIN = {
    Family.INVERSE_SQUARE: (0.0, math.inf),
    Family.HULTHEN: (0.0, math.inf),
    Family.SINH_SQUARED: (0.0, math.inf),
}


def field_to_scalar(profile: FieldProfile) -> PotentialConfig:
    """Scalar-only configuration (mass slot k, S = (e/c hbar) A_y) for a field profile.

    The antiderivatives are

    ======================  ==========================
    B(x)                    S(x)
    ======================  ==========================
    B0                      S0 x
    B0 / x^2                S0 / x
    B0 / cosh^2(a x)        S0 tanh(a x)
    B0 exp(-a x)            S0 exp(-a x)
    B0 e^{ax}/(e^{ax}-1)^2  S0 / (e^{a x} - 1)
    B0 / cos^2(a x)         S0 tan(a x)
    B0 / sinh^2(a x)        S0 coth(a x)
    ======================  ==========================

    with S0 from :meth:`FieldProfile.amplitude`.
    """
    if not isinstance(profile, FieldProfile):
        raise InvalidProfile("expected a FieldProfile")
    f, a, S0 = profile.family, profile.alpha, profile.amplitude()
    if f is Family.CONSTANT:
        S = family("power", c=S0, p=1)
    elif f is Family.INVERSE_SQUARE:
        S = family("power", c=S0, p=-1)
    elif f is Family.COSH_BARRIER:
        S = family("tanh", c=S0, lam=a)
    elif f is Family.EXP_DECAY:
        S = family("exponential", c=S0, lam=a)
    elif f is Family.HULTHEN:
        S = family("hulthen", c=S0, lam=a)
    elif f is Family.SEC_SQUARED:
        S = family("tan", c=S0, lam=a)
    else:
        S = family("coth", c=S0, lam=a)
    if f is Family.SEC_SQUARED:
        domain = (-math.pi / (2 * a), math.pi / (2 * a))
    else:
        domain = _DOMAIN.get(f, (-math.inf, math.inf))
    return PotentialConfig(m=profile.k, S=Potential.of(S), domain=domain)


def landau_spectrum(profile: FieldProfile, n: int, branch=Branch.POSITIVE) -> float:
    """Energy E_n = hbar v_F eps_n of level ``n`` on ``branch``.

    A vanishing field leaves only free transverse motion, whose threshold
    E = +-hbar v_F |k| is returned for every n.
    """
    branch = Branch(branch)
    if profile.B0 == 0:
        sgn = 1.0 if branch is Branch.POSITIVE else -1.0
        return sgn * profile.scales.energy * abs(profile.k)
    eps = cat.spectrum(profile.entry_id(), profile.entry_params(), n, branch)
    return profile.scales.energy * eps


def dispersion(profile: FieldProfile, ks, n_max: int = 5, branches=(Branch.POSITIVE, Branch.NEGATIVE)):
    """Rows (k, n, branch, E) over a sweep of transverse wavenumbers.

    Levels that are not bound at a given k are skipped, so each k contributes only
    the states that exist there.
    """
    rows = []
    for k in np.atleast_1d(np.asarray(ks, dtype=float)):
        prof = FieldProfile(profile.family, profile.B0, profile.alpha, float(k), profile.scales)
        for br in branches:
            br = Branch(br)
            for n in range(n_max + 1):
                try:
                    rows.append((float(k), n, br.value, landau_spectrum(prof, n, br)))
                except InvalidBoundState:
                    continue
    return rows
