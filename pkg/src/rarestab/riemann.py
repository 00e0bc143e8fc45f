"""Shock-free (two-rarefaction, constant-entropy) exact Riemann solutions.

The middle state is closed form because both fans share one entropy: the
Riemann invariants ``U +/- 2c/(gamma-1)`` are linear in the sound speed.
Sampling inverts the fan profiles in closed form as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gas import DomainError, GasParams, Primitive


class RiemannError(ValueError):
    """Riemann data outside the shock-free class."""


class EntropyMismatch(RiemannError):
    def __init__(self, s_left, s_right, tol):
        self.s_left = s_left
        self.s_right = s_right
        self.tol = tol
        super().__init__(
            f"left/right entropies differ: S_L={s_left!r}, S_R={s_right!r} (tol {tol:g})"
        )


class ShockRequired(RiemannError):
    def __init__(self, c_mid, c_left, c_right):
        self.c_mid = c_mid
        self.c_left = c_left
        self.c_right = c_right
        super().__init__(
            f"data need a compressive wave: middle sound speed {c_mid:.10g} exceeds "
            f"min(c_L, c_R) = {min(c_left, c_right):.10g}"
        )


class VacuumFormation(RiemannError):
    def __init__(self, c_mid):
        self.c_mid = c_mid
        super().__init__(f"rarefactions open a vacuum: middle sound speed {c_mid:.10g} <= 0")


@dataclass(frozen=True)
class State1D:
    rho: float
    theta: float
    u: float

    def as_tuple(self):
        return (self.rho, self.theta, self.u)


@dataclass(frozen=True)
class RiemannData:
    left: State1D
    right: State1D

    def __post_init__(self):
        for side in (self.left, self.right):
            if not (side.rho > 0 and side.theta > 0):
                raise DomainError(f"Riemann states need positive density and temperature: {side}")
            if not all(math.isfinite(v) for v in side.as_tuple()):
                raise DomainError(f"non-finite Riemann state: {side}")

    @classmethod
    def from_triples(cls, left, right):
        return cls(State1D(*map(float, left)), State1D(*map(float, right)))

    def primitives(self):
        return (
            Primitive(self.left.rho, self.left.theta, self.left.u, 0.0),
            Primitive(self.right.rho, self.right.theta, self.right.u, 0.0),
        )

    def to_dict(self):
        return {"left": list(self.left.as_tuple()), "right": list(self.right.as_tuple())}


def common_entropy(d: RiemannData, gas: GasParams, tol_S=1e-10) -> float:
    s_left = float(gas.entropy(d.left.rho, d.left.theta))
    s_right = float(gas.entropy(d.right.rho, d.right.theta))
    if abs(s_left - s_right) > tol_S:
        raise EntropyMismatch(s_left, s_right, tol_S)
    return s_left


@dataclass(frozen=True)
class ShockFreeSolution:
    gas: GasParams
    S: float
    left: State1D
    middle: State1D
    right: State1D
    fan1: tuple
    fan2: tuple

    @property
    def c_left(self):
        return math.sqrt(self.gas.gamma * self.left.theta)

    @property
    def c_right(self):
        return math.sqrt(self.gas.gamma * self.right.theta)

    @property
    def max_speed(self):
        return max(abs(self.fan1[0]), abs(self.fan2[1]))

    def to_dict(self):
        return {
            "S": self.S,
            "c_v": self.gas.c_v,
            "left": list(self.left.as_tuple()),
            "middle": list(self.middle.as_tuple()),
            "right": list(self.right.as_tuple()),
            "fan1": list(self.fan1),
            "fan2": list(self.fan2),
        }

    # ---- sampling -------------------------------------------------------

    def _fan_sound_speed(self, xi):
        """Sound speed profile on the whole line (only meaningful inside fans)."""
        gamma = self.gas.gamma
        a = (gamma - 1.0) / (gamma + 1.0)
        b = 2.0 / (gamma + 1.0)
        c1 = a * (self.left.u - xi) + b * self.c_left
        c2 = a * (xi - self.right.u) + b * self.c_right
        return c1, c2

    def sample_arrays(self, xi):
        """Vectorized ``sample``: returns density, temperature, velocity arrays."""
        xi = np.asarray(xi, dtype=float)
        gamma = self.gas.gamma
        K = math.exp(self.S / self.gas.c_v)
        c1, c2 = self._fan_sound_speed(xi)
        c = np.full(xi.shape, math.sqrt(gamma * self.middle.theta))
        u = np.full(xi.shape, self.middle.u)

        in1 = (xi > self.fan1[0]) & (xi < self.fan1[1])
        in2 = (xi > self.fan2[0]) & (xi < self.fan2[1])
        c = np.where(in1, c1, c)
        u = np.where(in1, xi + c1, u)
        c = np.where(in2, c2, c)
        u = np.where(in2, xi - c2, u)

        theta = c * c / gamma
        rho = (theta / K) ** self.gas.c_v

        lft = xi <= self.fan1[0]
        rgt = xi >= self.fan2[1]
        rho = np.where(lft, self.left.rho, np.where(rgt, self.right.rho, rho))
        theta = np.where(lft, self.left.theta, np.where(rgt, self.right.theta, theta))
        u = np.where(lft, self.left.u, np.where(rgt, self.right.u, u))
        mid = ~(lft | rgt | in1 | in2)
        rho = np.where(mid, self.middle.rho, rho)
        theta = np.where(mid, self.middle.theta, theta)
        return rho, theta, u

    def sample(self, xi):
        rho, theta, u = self.sample_arrays(float(xi))
        return float(rho), float(theta), float(u)

    def derivatives(self, xi):
        """Analytic xi-derivatives ``(R', Theta', U')``; zero outside the fans."""
        xi = np.asarray(xi, dtype=float)
        gamma = self.gas.gamma
        a = (gamma - 1.0) / (gamma + 1.0)
        du_fan = 2.0 / (gamma + 1.0)
        c1, c2 = self._fan_sound_speed(xi)
        in1 = (xi > self.fan1[0]) & (xi < self.fan1[1])
        in2 = (xi > self.fan2[0]) & (xi < self.fan2[1])
        c = np.where(in1, c1, np.where(in2, c2, 1.0))
        dc = np.where(in1, -a, np.where(in2, a, 0.0))
        dU = np.where(in1 | in2, du_fan, 0.0)
        # Theta = c^2/gamma and rho = (Theta/K)^c_v
        dtheta = 2.0 * c * dc / gamma
        theta = c * c / gamma
        K = math.exp(self.S / self.gas.c_v)
        rho = (theta / K) ** self.gas.c_v
        drho = self.gas.c_v * rho * dtheta / theta
        return drho, dtheta, dU

    def space_time_derivatives(self, t, x1):
        """Derivatives of (R, Theta, U) in x1 and t at time ``t``; zero at ``t = 0``."""
        x1 = np.asarray(x1, dtype=float)
        if t <= 0:
            z = np.zeros_like(x1)
            return {k: z for k in ("R_x", "T_x", "U_x", "R_t", "T_t", "U_t")}
        xi = x1 / t
        dR, dT, dU = self.derivatives(xi)
        return {
            "R_x": dR / t, "T_x": dT / t, "U_x": dU / t,
            "R_t": -xi * dR / t, "T_t": -xi * dT / t, "U_t": -xi * dU / t,
        }


def solve_shock_free(d: RiemannData, gas: GasParams, tol_S=1e-10) -> ShockFreeSolution:
    S = common_entropy(d, gas, tol_S)
    gamma = gas.gamma
    c_left = float(gas.sound_speed(d.left.rho, S))
    c_right = float(gas.sound_speed(d.right.rho, S))
    c_mid = 0.5 * (c_left + c_right) - 0.25 * (gamma - 1.0) * (d.right.u - d.left.u)
    if c_mid <= 0:
        raise VacuumFormation(c_mid)
    if c_mid > min(c_left, c_right) + 1e-12 * (c_left + c_right):
        raise ShockRequired(c_mid, c_left, c_right)
    u_mid = d.left.u + 2.0 * (c_left - c_mid) / (gamma - 1.0)
    # anchored on the left state so a zero-strength wave reproduces it exactly
    ratio = c_mid / c_left
    rho_mid = d.left.rho * ratio ** (2.0 * gas.c_v)
    theta_mid = d.left.theta * ratio * ratio
    # end temperatures rebuilt on the common isentrope
    left = State1D(d.left.rho, float(gas.temperature_from_entropy(d.left.rho, S)), d.left.u)
    right = State1D(d.right.rho, float(gas.temperature_from_entropy(d.right.rho, S)), d.right.u)
    fan1 = (d.left.u - c_left, u_mid - c_mid)
    fan2 = (u_mid + c_mid, d.right.u + c_right)
    return ShockFreeSolution(
        gas=gas,
        S=S,
        left=left,
        middle=State1D(rho_mid, theta_mid, u_mid),
        right=right,
        fan1=(min(fan1), max(fan1)),
        fan2=(min(fan2), max(fan2)),
    )


def sample(sol: ShockFreeSolution, xi):
    return sol.sample(xi)


def sample_field(sol: ShockFreeSolution, t, x1_values):
    """Exact solution at time ``t`` on points ``x1_values``.

    At ``t = 0`` the discontinuous initial data are returned, with the left
    state taken for ``x1 <= 0``.
    """
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t!r}")
    x1 = np.asarray(x1_values, dtype=float)
    if t == 0:
        lft = x1 <= 0
        pick = lambda a, b: np.where(lft, a, b)  # noqa: E731
        return (
            pick(sol.left.rho, sol.right.rho),
            pick(sol.left.theta, sol.right.theta),
            pick(sol.left.u, sol.right.u),
        )
    return sol.sample_arrays(x1 / t)
