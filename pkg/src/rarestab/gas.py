"""Ideal-gas thermodynamics with unit gas constant.

Pressure is ``rho * theta``, internal energy density ``c_v * rho * theta`` and
specific entropy ``c_v * log(theta) - log(rho)``.  Every function accepts
scalars or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Raised when a thermodynamic function receives a non-admissible argument."""


def _require_positive(name, value):
    if np.any(~(np.asarray(value) > 0)):
        raise DomainError(f"{name} must be strictly positive, got {value!r}")


@dataclass(frozen=True)
class GasParams:
    """Specific heat at constant volume; the adiabatic exponent is derived."""

    c_v: float = 1.5

    def __post_init__(self):
        if not (math.isfinite(self.c_v) and self.c_v > 0):
            raise DomainError(f"c_v must be positive and finite, got {self.c_v!r}")

    @property
    def gamma(self) -> float:
        return (self.c_v + 1.0) / self.c_v

    def pressure(self, rho, theta):
        _require_positive("rho", rho)
        _require_positive("theta", theta)
        return rho * theta

    def entropy(self, rho, theta):
        _require_positive("rho", rho)
        _require_positive("theta", theta)
        # never form theta**c_v: overflows for large c_v
        return self.c_v * np.log(theta) - np.log(rho)

    def temperature_from_entropy(self, rho, s):
        _require_positive("rho", rho)
        return np.exp(s / self.c_v) * rho ** (1.0 / self.c_v)

    def isentropic_pressure(self, rho, S):
        """Pressure along the isentrope ``s = S``: ``exp(S/c_v) * rho**gamma``."""
        _require_positive("rho", rho)
        return np.exp(S / self.c_v) * rho**self.gamma

    def sound_speed(self, rho, S):
        _require_positive("rho", rho)
        gamma = self.gamma
        return np.sqrt(gamma * np.exp(S / self.c_v) * rho ** (gamma - 1.0))

    def prim_to_cons(self, p: Primitive) -> Conserved:
        _require_positive("rho", p.rho)
        _require_positive("theta", p.theta)
        kinetic = 0.5 * p.rho * (p.u1 * p.u1 + p.u2 * p.u2)
        return Conserved(p.rho, p.rho * p.u1, p.rho * p.u2, kinetic + self.c_v * p.rho * p.theta)

    def cons_to_prim(self, c: Conserved) -> Primitive:
        _require_positive("rho", c.rho)
        internal = c.E_tot - 0.5 * (c.m1 * c.m1 + c.m2 * c.m2) / c.rho
        _require_positive("internal energy", internal)
        return Primitive(c.rho, internal / (self.c_v * c.rho), c.m1 / c.rho, c.m2 / c.rho)

    def to_dict(self):
        return {"c_v": self.c_v, "gamma": self.gamma}


@dataclass(frozen=True)
class Primitive:
    rho: float
    theta: float
    u1: float = 0.0
    u2: float = 0.0


@dataclass(frozen=True)
class Conserved:
    rho: float
    m1: float
    m2: float
    E_tot: float


@dataclass(frozen=True)
class AdmissibilityBounds:
    """Upper bounds on density, temperature, |entropy| and speed."""

    rho_max: float
    theta_max: float
    s_max: float
    u_max: float

    def __post_init__(self):
        for name in ("rho_max", "theta_max", "s_max", "u_max"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")

    @classmethod
    def generous(cls, states, gas: GasParams, factor=10.0):
        """Bounds at ``factor`` times the extrema of the given primitive states."""
        rho = max(p.rho for p in states)
        theta = max(p.theta for p in states)
        s = max(abs(float(gas.entropy(p.rho, p.theta))) for p in states)
        u = max(math.hypot(p.u1, p.u2) for p in states)
        return cls(factor * rho, factor * theta, factor * max(s, 1.0), factor * max(u, 1.0))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violated: str | None = None

    def __bool__(self):
        return self.ok


def validate_admissible(p: Primitive, b: AdmissibilityBounds, gas: GasParams) -> Verdict:
    """Check a state against the non-degeneracy bounds; never raises."""
    values = (p.rho, p.theta, p.u1, p.u2)
    if not all(math.isfinite(v) for v in values):
        return Verdict(False, "finite")
    if not 0 < p.rho <= b.rho_max:
        return Verdict(False, "density")
    if not 0 < p.theta <= b.theta_max:
        return Verdict(False, "temperature")
    if not abs(float(gas.entropy(p.rho, p.theta))) < b.s_max:
        return Verdict(False, "entropy")
    if not math.hypot(p.u1, p.u2) < b.u_max:
        return Verdict(False, "velocity")
    return Verdict(True)


# array helpers used by the finite-volume code; no domain checks (hot path)

def cons_to_prim_arrays(q, c_v):
    rho = q[0]
    u1 = q[1] / rho
    u2 = q[2] / rho
    theta = (q[3] / rho - 0.5 * (u1 * u1 + u2 * u2)) / c_v
    return rho, theta, u1, u2


def prim_to_cons_arrays(rho, theta, u1, u2, c_v):
    rho = np.asarray(rho, dtype=float)
    return np.stack(
        [rho, rho * u1, rho * u2, 0.5 * rho * (u1 * u1 + u2 * u2) + c_v * rho * theta]
    )
