"""Relative energy between a fluid state and a reference state.

The functional is a Bregman-type distance built on the ballistic free energy
``H(rho, theta; theta_ref) = rho * (c_v * theta - theta_ref * s(rho, theta))``.
Also provides the pointwise production terms bounding its time derivative
against a rarefaction wave and the scalar functions F and G whose
non-positivity makes that production non-positive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gas import DomainError, GasParams, Primitive, cons_to_prim_arrays


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    thermo: float
    measure: float

    @property
    def total(self):
        return self.kinetic + self.thermo

    @property
    def normalized(self):
        return self.total / self.measure


@dataclass(frozen=True)
class RhsBreakdown:
    """Named terms of the relative energy production (pointwise or integrated).

    ``total = velgrad + entropy + density`` is the production itself;
    ``majorized`` replaces the entropy cross term by its Young bound.
    """

    velgrad: float
    entropy: float
    density: float
    young: float
    majorized: float

    @property
    def total(self):
        return self.velgrad + self.entropy + self.density


def ballistic_free_energy(rho, theta, theta_tilde, gas: GasParams):
    if np.any(~(np.asarray(theta_tilde) > 0)):
        raise DomainError(f"theta_tilde must be positive, got {theta_tilde!r}")
    return rho * (gas.c_v * theta - theta_tilde * gas.entropy(rho, theta))


def partial_H_rho(rho_tilde, theta_tilde, gas: GasParams):
    """Derivative of the ballistic free energy in density at the reference state."""
    return theta_tilde * (gas.c_v + 1.0 - gas.entropy(rho_tilde, theta_tilde))


def relative_energy_density(p: Primitive, tilde: Primitive, gas: GasParams):
    for st in (p, tilde):
        if not (st.rho > 0 and st.theta > 0):
            raise DomainError(f"state must have positive density and temperature: {st}")
    if p == tilde:
        return 0.0
    kinetic, thermo = relative_energy_parts(
        p.rho, p.theta, p.u1, p.u2, tilde.rho, tilde.theta, tilde.u1, tilde.u2, gas
    )
    return float(kinetic + thermo)


def relative_energy_parts(rho, theta, u1, u2, rt, tt, ut1, ut2, gas: GasParams):
    """Vectorized kinetic and thermal densities, each non-negative up to rounding.

    The thermal part is evaluated as the sum of two separately non-negative
    brackets so that it stays accurate close to coincidence.
    """
    rho, theta, u1, u2 = (np.asarray(a, dtype=float) for a in (rho, theta, u1, u2))
    c_v = gas.c_v
    kinetic = 0.5 * rho * ((u1 - ut1) ** 2 + (u2 - ut2) ** 2)
    r = theta / tt
    thermal_t = c_v * rho * tt * ((r - 1.0) - np.log(r))
    q = rho / rt
    thermal_r = tt * rt * (q * np.log(q) - (q - 1.0))
    return kinetic, thermal_t + thermal_r


def integrate_relative_energy(fields, sol, t) -> EnergyBreakdown:
    """Midpoint-rule relative energy of ``fields`` against ``sol`` at time ``t``.

    The reference transverse velocity is zero.
    """
    from .riemann import sample_field

    grid = fields.grid
    rho, theta, u1, u2 = cons_to_prim_arrays(fields.q, sol.gas.c_v)
    bad = ~((rho > 0) & (theta > 0))
    if np.any(bad):
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        raise DomainError(f"inadmissible cell state at index {idx}")
    R, T, U = sample_field(sol, t, grid.x1_centers)
    kin, th = relative_energy_parts(
        rho, theta, u1, u2, R[:, None], T[:, None], U[:, None], 0.0, sol.gas
    )
    dA = grid.dx * grid.dy
    return EnergyBreakdown(float(np.sum(kin) * dA), float(np.sum(th) * dA), grid.measure)


# ---- scalar functions controlling the production sign ----------------------

def F_function(rho, s, R, Theta, gas: GasParams):
    if np.any(~(np.asarray(R) > 0)) or np.any(~(np.asarray(Theta) > 0)):
        raise DomainError("reference density and temperature must be positive")
    c_v = gas.c_v
    S = gas.entropy(R, Theta)
    theta = gas.temperature_from_entropy(rho, s)
    ds = s - S
    return (
        Theta
        - theta
        - (R / rho - 1.0) * Theta / c_v
        + ds * Theta / c_v
        + Theta * ds * ds / (4.0 * c_v * (c_v + 1.0))
    )


def G_function(y, z, gas: GasParams):
    if np.any(~(np.asarray(y) > 0)):
        raise DomainError(f"y must be positive, got {y!r}")
    c_v = gas.c_v
    return 1.0 - np.exp(z) * y - (y ** (-c_v) - 1.0) / c_v + z + c_v * z * z / (4.0 * (c_v + 1.0))


def G_grad(y, z, gas: GasParams):
    if np.any(~(np.asarray(y) > 0)):
        raise DomainError(f"y must be positive, got {y!r}")
    c_v = gas.c_v
    ez = np.exp(z)
    return -ez + y ** (-(c_v + 1.0)), -ez * y + 1.0 + c_v * z / (2.0 * (c_v + 1.0))


def G_critical_value(z, gas: GasParams):
    """Value of G at its unique y-critical point ``y = exp(-z/(c_v+1))``."""
    c_v = gas.c_v
    k = c_v / (c_v + 1.0)
    return -(np.expm1(k * z)) / k + z + c_v * z * z / (4.0 * (c_v + 1.0))


def rhs_r3_density(p: Primitive, exact, exact_derivs, gas: GasParams, exact_time_derivs=None,
                   clamp_tol=0.0) -> RhsBreakdown:
    """Pointwise production of relative energy against a rarefaction wave.

    Parameters
    ----------
    p : Primitive
        State of the (numerical) solution.
    exact : tuple
        Exact ``(R, Theta, U)`` at the same point.
    exact_derivs : tuple
        ``(dU/dx1, dTheta/dx1)``; ``dU/dx1`` must be non-negative.
    exact_time_derivs : tuple, optional
        ``(dR/dt, dTheta/dt)``.  When omitted they follow from the isentropic
        rarefaction equations, ``R_t = -U R_x - R U_x`` and
        ``Theta_t = -U Theta_x - Theta U_x / c_v``.
    clamp_tol : float
        Entropy undershoots ``S - s`` up to this size are treated as zero.
    """
    R, Theta, U = exact
    U_x, T_x = exact_derivs
    if U_x < 0:
        raise DomainError(f"dU/dx1 must be non-negative, got {U_x!r}")
    if exact_time_derivs is None:
        # R_x from Theta_x along the isentrope: R = exp(-S) Theta^c_v
        R_x = gas.c_v * R * T_x / Theta
        R_t = -U * R_x - R * U_x
        T_t = -U * T_x - Theta * U_x / gas.c_v
    else:
        R_t, T_t = exact_time_derivs
        R_x = gas.c_v * R * T_x / Theta
    terms = _rhs_terms(p.rho, p.theta, p.u1, R, Theta, U, U_x, T_x, R_x, R_t, T_t, gas, clamp_tol)
    return RhsBreakdown(*(float(v) for v in terms))


def _rhs_terms(rho, theta, u1, R, Theta, U, U_x, T_x, R_x, R_t, T_t, gas, clamp_tol):
    c_v = gas.c_v
    S = gas.entropy(R, Theta)
    ds = gas.entropy(rho, theta) - S
    if clamp_tol > 0:
        ds = np.where((ds < 0) & (ds >= -clamp_tol), 0.0, ds)
    velgrad = (-rho * (U - u1) ** 2 + (R * Theta - rho * theta)) * U_x
    material_T = T_t + U * T_x
    entropy = -rho * ds * material_T - rho * ds * (u1 - U) * T_x
    RT_t = R_t * Theta + R * T_t
    RT_x = R_x * Theta + R * T_x
    density = (1.0 - rho / R) * (RT_t + U * RT_x)
    with np.errstate(divide="ignore", invalid="ignore"):
        young = np.where(U_x > 0, 0.25 * rho * ds * ds * T_x * T_x / np.where(U_x > 0, U_x, 1.0), 0.0)
    core = Theta - theta - (R / rho - 1.0) * Theta / c_v + ds * Theta / c_v
    majorized = rho * core * U_x + young
    return velgrad, entropy, density, young, majorized


def integrate_rhs(fields, sol, t, clamp_tol=1e-12) -> RhsBreakdown:
    """Midpoint-rule integrals of the production terms at time ``t``."""
    from .riemann import sample_field

    grid = fields.grid
    gas = sol.gas
    rho, theta, u1, _ = cons_to_prim_arrays(fields.q, gas.c_v)
    x = grid.x1_centers
    R, T, U = sample_field(sol, t, x)
    d = sol.space_time_derivatives(t, x)
    col = lambda a: np.asarray(a)[:, None]  # noqa: E731
    terms = _rhs_terms(
        rho, theta, u1, col(R), col(T), col(U), col(d["U_x"]), col(d["T_x"]),
        col(d["R_x"]), col(d["R_t"]), col(d["T_t"]), gas, clamp_tol,
    )
    dA = grid.dx * grid.dy
    return RhsBreakdown(*(float(np.sum(np.broadcast_to(v, rho.shape)) * dA) for v in terms))


def quadratic_form_check(R, Theta, gas: GasParams, h=1e-4):
    """Eigenvalues of the Hessian of the production core at coincidence.

    The core ``Theta - theta(rho,s) - (R/rho - 1) Theta/c_v + (s - S) Theta/c_v``
    is differentiated twice by central differences in the variables
    ``v = 1/rho - 1/R`` and ``sigma = s - S`` at ``v = sigma = 0``.
    """
    c_v = gas.c_v
    S = float(gas.entropy(R, Theta))

    def core(v, sigma):
        rho = 1.0 / (v + 1.0 / R)
        theta = float(gas.temperature_from_entropy(rho, S + sigma))
        return Theta - theta - (R / rho - 1.0) * Theta / c_v + sigma * Theta / c_v

    hv = h / R
    hs = h
    f0 = core(0.0, 0.0)
    fvv = (core(hv, 0.0) - 2 * f0 + core(-hv, 0.0)) / hv**2
    fss = (core(0.0, hs) - 2 * f0 + core(0.0, -hs)) / hs**2
    fvs = (core(hv, hs) - core(hv, -hs) - core(-hv, hs) + core(-hv, -hs)) / (4 * hv * hs)
    return np.linalg.eigvalsh(np.array([[fvv, fvs], [fvs, fss]]))
