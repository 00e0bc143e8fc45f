"""Finite-volume solver for the 2-D Euler system with far-field x1 boundaries.

Dimension-unsplit local Lax-Friedrichs fluxes; forward Euler for the
first-order scheme and two-stage SSP Runge-Kutta with minmod-limited
primitive reconstruction for the second-order one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import energy
from ..gas import Conserved, DomainError, GasParams, prim_to_cons_arrays
from ..riemann import RiemannData, ShockFreeSolution, sample_field, solve_shock_free
from . import backend
from .grid import FieldSet, Grid2D, SolverConfig

NG = 2


class GuardViolation(ValueError):
    """Waves would reach the truncated x1 boundary before ``t_end``."""


class StepAbort(RuntimeError):
    def __init__(self, cell, t):
        self.cell = cell
        self.t = t
        super().__init__(f"inadmissible state in cell {cell} at t={t:.6g}")


# ---- initial data ------------------------------------------------------------

def _farfield(d: RiemannData, gas: GasParams):
    pl, pr = d.primitives()
    return tuple(
        prim_to_cons_arrays(p.rho, p.theta, p.u1, p.u2, gas.c_v).astype(float)
        for p in (pl, pr)
    )


def initialize_riemann(grid: Grid2D, d: RiemannData, gas: GasParams) -> FieldSet:
    """Left state where the cell center has ``x1 <= 0``, right state elsewhere."""
    qL, qR = _farfield(d, gas)
    left = grid.x1_centers <= 0
    q = np.where(left[None, :, None], qL[:, None, None], qR[:, None, None])
    q = np.broadcast_to(q, (4, grid.Nx, grid.Ny)).copy()
    return FieldSet(grid, q, farfield=(qL, qR))


def perturbation_profile(grid: Grid2D, mode: int, width: float):
    """``cos^2`` bump of half-width ``width`` in x1 times ``sin(2 pi mode x2)``."""
    x1 = grid.x1_centers
    bump = np.where(np.abs(x1) < width, np.cos(0.5 * np.pi * x1 / width) ** 2, 0.0)
    return bump[:, None] * np.sin(2.0 * np.pi * mode * grid.x2_centers)[None, :]


def initialize_perturbed(grid: Grid2D, d: RiemannData, gas: GasParams, amplitude=0.01, mode=2,
                         width_cells=4) -> FieldSet:
    """Riemann data with an isentropic, x2-periodic density perturbation.

    Density is multiplied by ``1 + amplitude * profile`` on cells within
    ``width_cells`` cells of the interface; temperature is recomputed at the
    unperturbed cell entropy and velocity is unchanged.
    """
    base = initialize_riemann(grid, d, gas)
    if amplitude == 0:
        return base
    rho, theta, u1, u2 = base.primitives(gas.c_v)
    s = gas.entropy(rho, theta)
    rho_p = rho * (1.0 + amplitude * perturbation_profile(grid, mode, width_cells * grid.dx))
    if np.any(rho_p <= 0):
        raise DomainError(f"perturbation amplitude {amplitude!r} makes the density non-positive")
    theta_p = gas.temperature_from_entropy(rho_p, s)
    q = prim_to_cons_arrays(rho_p, theta_p, u1, u2, gas.c_v)
    out = FieldSet(grid, q, farfield=base.farfield)
    out.meta.update(amplitude=amplitude, mode=mode, width_cells=width_cells)
    return out


# ---- fluxes --------------------------------------------------------------------

def _as_array(c):
    if isinstance(c, Conserved):
        return np.array([c.rho, c.m1, c.m2, c.E_tot], dtype=float)
    return np.asarray(c, dtype=float)


def _check_state(q, gas):
    rho = q[0]
    internal = q[3] - 0.5 * (q[1] ** 2 + q[2] ** 2) / rho if rho > 0 else -1.0
    if not (rho > 0 and internal > 0):
        raise DomainError(f"inadmissible conserved state {q.tolist()}")


def physical_flux(c, direction: int, gas: GasParams):
    """Exact Euler flux along ``direction`` (1 or 2)."""
    if direction not in (1, 2):
        raise ValueError("direction must be 1 or 2")
    q = _as_array(c)
    _check_state(q, gas)
    rho = q[0]
    un = q[direction] / rho
    p = (gas.gamma - 1.0) * (q[3] - 0.5 * (q[1] * q[1] + q[2] * q[2]) / rho)
    f = q * un
    f[direction] += p
    f[3] = (q[3] + p) * un
    return f


def numerical_flux(left, right, direction: int, gas: GasParams, kernels=None):
    """Local Lax-Friedrichs flux between two states, via the kernel backend."""
    if direction not in (1, 2):
        raise ValueError("direction must be 1 or 2")
    ql = _as_array(left)
    qr = _as_array(right)
    _check_state(ql, gas)
    _check_state(qr, gas)
    k = kernels or backend.get()
    return np.asarray(k.face_flux(ql, qr, direction, gas.gamma))


# ---- time stepping ---------------------------------------------------------------

def extend(fields: FieldSet) -> np.ndarray:
    """Copy of ``fields.q`` padded with ghost layers (periodic x2, far field x1)."""
    q = fields.q
    _, nx, ny = q.shape
    qe = np.empty((4, nx + 2 * NG, ny + 2 * NG))
    qe[:, NG:-NG, NG:-NG] = q
    qe[:, NG:-NG, :NG] = q[:, :, -NG:]
    qe[:, NG:-NG, -NG:] = q[:, :, :NG]
    if fields.farfield is not None:
        qe[:, :NG, :] = fields.farfield[0][:, None, None]
        qe[:, -NG:, :] = fields.farfield[1][:, None, None]
    else:
        qe[:, :NG, :] = qe[:, NG:NG + 1, :]
        qe[:, -NG:, :] = qe[:, -NG - 1:-NG, :]
    return qe


def _rhs(fields, gas, order, kernels):
    qe = extend(fields)
    res = np.empty_like(fields.q)
    bflux = np.empty((2, 4, fields.grid.Ny))
    kernels.residual(qe, NG, fields.grid.dx, fields.grid.dy, gas.gamma, order, res, bflux)
    # net inflow of each conserved quantity through the x1 boundaries, per unit time
    inflow = (bflux[0].sum(axis=1) - bflux[1].sum(axis=1)) * fields.grid.dy
    return res, inflow


def stable_dt(fields: FieldSet, config: SolverConfig, gas: GasParams, kernels=None):
    k = kernels or backend.get()
    lam = k.max_wavespeed(fields.q, gas.gamma)
    if not (lam > 0 and math.isfinite(lam)):
        raise StepAbort(None, fields.time)
    return config.cfl * min(fields.grid.dx, fields.grid.dy) / lam


def advance(fields: FieldSet, dt, config: SolverConfig, gas: GasParams, kernels=None):
    """One step of size ``dt``; returns the new fields and the boundary inflow over the step."""
    k = kernels or backend.get()
    order = config.order
    res, inflow = _rhs(fields, gas, order, k)
    if order == 1:
        new = fields.copy(fields.q + dt * res)
        transfer = dt * inflow
    else:
        stage = fields.copy(fields.q + dt * res)
        _abort_if_bad(stage, gas, fields.time + dt)
        res1, inflow1 = _rhs(stage, gas, order, k)
        new = fields.copy(0.5 * fields.q + 0.5 * (stage.q + dt * res1))
        transfer = 0.5 * dt * (inflow + inflow1)
    new.time = fields.time + dt
    _abort_if_bad(new, gas, new.time)
    return new, transfer


def _abort_if_bad(fields, gas, t):
    bad = fields.check_admissible(gas.c_v)
    if bad is not None:
        raise StepAbort(bad, t)


def step(fields: FieldSet, grid: Grid2D, config: SolverConfig, gas: GasParams, dt=None,
         kernels=None):
    """Advance by one CFL-limited step; returns ``(new_fields, dt)``."""
    if grid != fields.grid:
        raise DomainError("fields live on a different grid")
    if dt is None:
        dt = stable_dt(fields, config, gas, kernels)
    new, _ = advance(fields, dt, config, gas, kernels)
    return new, dt


# ---- diagnostics -------------------------------------------------------------------

@dataclass
class EntropyDiagnostics:
    production: np.ndarray
    min_production: float
    s_min: float


def _entropy_state(fields, gas):
    qe = extend(fields)
    rho = qe[0]
    u1 = qe[1] / rho
    u2 = qe[2] / rho
    theta = (qe[3] / rho - 0.5 * (u1 * u1 + u2 * u2)) / gas.c_v
    s = gas.c_v * np.log(theta) - np.log(rho)
    c = np.sqrt(gas.gamma * theta)
    return rho * s, u1, u2, c


def _entropy_flux(eta, un, c, lo, hi):
    """Rusanov entropy flux between cells ``lo`` and ``hi`` (index tuples)."""
    lam = np.maximum(np.abs(un[lo]) + c[lo], np.abs(un[hi]) + c[hi])
    return 0.5 * (eta[lo] * un[lo] + eta[hi] * un[hi]) - 0.5 * lam * (eta[hi] - eta[lo])


def entropy_production(before: FieldSet, after: FieldSet, dt, grid: Grid2D, gas: GasParams):
    """Per-cell residual of ``d_t(rho s) + div(rho s u)``.

    Face entropy fluxes are the dissipative (Rusanov) fluxes matching the
    local Lax-Friedrichs scheme, evaluated on the ``before`` state; for the
    first-order scheme the production is non-negative up to rounding.
    """
    if not dt > 0:
        raise DomainError("dt must be positive")
    eta, u1, u2, c = _entropy_state(before, gas)
    n = NG
    inner = slice(n, -n)
    phi_x = _entropy_flux(eta, u1, c, (slice(n - 1, -n), inner), (slice(n, -n + 1), inner))
    phi_y = _entropy_flux(eta, u2, c, (inner, slice(n - 1, -n)), (inner, slice(n, -n + 1)))
    rho_a, theta_a, _, _ = after.primitives(gas.c_v)
    s_a = gas.entropy(rho_a, theta_a)
    prod = ((rho_a * s_a - eta[inner, inner]) / dt
            + np.diff(phi_x, axis=0) / grid.dx + np.diff(phi_y, axis=1) / grid.dy)
    return EntropyDiagnostics(prod, float(prod.min()), float(s_a.min()))


def l1_error(fields: FieldSet, sol: ShockFreeSolution, t, grid: Grid2D):
    """L1 distances of (rho, theta, u1, u2) to the exact solution extended in x2."""
    if t < 0:
        raise DomainError("t must be non-negative")
    rho, theta, u1, u2 = fields.primitives(sol.gas.c_v)
    R, T, U = sample_field(sol, t, grid.x1_centers)
    dA = grid.dx * grid.dy
    return {
        "rho": float(np.sum(np.abs(rho - R[:, None])) * dA),
        "theta": float(np.sum(np.abs(theta - T[:, None])) * dA),
        "u1": float(np.sum(np.abs(u1 - U[:, None])) * dA),
        "u2": float(np.sum(np.abs(u2)) * dA),
    }


# ---- driver ----------------------------------------------------------------------

SERIES_COLUMNS = (
    "t", "dt", "mass", "mom1", "mom2", "energy", "s_min", "entropy_prod_min",
    "E_total", "E_kinetic", "E_thermo", "l1_rho", "l1_theta", "l1_u1", "l1_u2",
    "rhs_velgrad", "rhs_entropy", "rhs_density", "rhs_young",
)


@dataclass
class Snapshot:
    t: float
    fields: FieldSet
    energy: energy.EnergyBreakdown
    totals: np.ndarray
    s_min: float
    entropy_prod_min: float
    l1: dict


@dataclass
class RunResult:
    solution: ShockFreeSolution
    final: FieldSet
    series: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    steps: int = 0
    conservation_error: np.ndarray = None
    s_min: float = math.inf

    def column(self, name):
        return np.array([row[name] for row in self.series])


def check_guard(grid: Grid2D, config: SolverConfig, sol: ShockFreeSolution):
    reach = config.t_end * sol.max_speed
    if not reach < 0.9 * grid.Lx:
        raise GuardViolation(
            f"waves travel {reach:.6g} by t_end={config.t_end:g}, need < 0.9*Lx = {0.9 * grid.Lx:.6g}"
        )


def _row(fields, sol, gas, t, dt, prod_min):
    grid = fields.grid
    rho, theta, _, _ = fields.primitives(gas.c_v)
    tot = fields.totals()
    e = energy.integrate_relative_energy(fields, sol, t)
    rhs = energy.integrate_rhs(fields, sol, t)
    l1 = l1_error(fields, sol, t, grid)
    return {
        "t": t, "dt": dt,
        "mass": float(tot[0]), "mom1": float(tot[1]), "mom2": float(tot[2]), "energy": float(tot[3]),
        "s_min": float(gas.entropy(rho, theta).min()),
        "entropy_prod_min": prod_min,
        "E_total": e.total, "E_kinetic": e.kinetic, "E_thermo": e.thermo,
        "l1_rho": l1["rho"], "l1_theta": l1["theta"], "l1_u1": l1["u1"], "l1_u2": l1["u2"],
        "rhs_velgrad": rhs.velgrad, "rhs_entropy": rhs.entropy,
        "rhs_density": rhs.density, "rhs_young": rhs.young,
    }, e, tot, l1


def run(grid: Grid2D, config: SolverConfig, data: RiemannData, gas: GasParams, perturbation=None,
        kernels=None, on_snapshot=None) -> RunResult:
    """Advance Riemann (optionally perturbed) data to ``config.t_end``.

    One time-series row is recorded per step.  Snapshot times are hit
    exactly by shortening the step that would cross them.
    """
    sol = solve_shock_free(data, gas)
    check_guard(grid, config, sol)
    if perturbation:
        fields = initialize_perturbed(grid, data, gas, **perturbation)
    else:
        fields = initialize_riemann(grid, data, gas)
    result = RunResult(solution=sol, final=fields)
    pending = list(config.snapshot_times)
    cons_err = np.zeros(4)

    def record(f, dt, prod_min):
        row, e, tot, l1 = _row(f, sol, gas, f.time, dt, prod_min)
        result.series.append(row)
        result.s_min = min(result.s_min, row["s_min"])
        while pending and pending[0] <= f.time + 1e-12 * config.t_end:
            pending.pop(0)
            snap = Snapshot(f.time, f, e, tot, row["s_min"], prod_min, l1)
            result.snapshots.append(snap)
            if on_snapshot is not None:
                on_snapshot(len(result.snapshots) - 1, snap)

    record(fields, 0.0, math.nan)
    while fields.time < config.t_end * (1 - 1e-14):
        dt = stable_dt(fields, config, gas, kernels)
        target = pending[0] if pending else config.t_end
        if fields.time + dt >= target:
            dt = target - fields.time
        if not dt > 0:
            # snapshot time coincides with the current time
            dt = min(stable_dt(fields, config, gas, kernels), config.t_end - fields.time)
        new, transfer = advance(fields, dt, config, gas, kernels)
        if pending and abs(new.time - pending[0]) <= 1e-12 * config.t_end:
            new.time = pending[0]
        before_tot = fields.totals()
        after_tot = new.totals()
        scale = (
            np.abs(fields.q).sum(axis=(1, 2)) * grid.dx * grid.dy
            + np.abs(transfer)
        )
        err = np.abs(after_tot - before_tot - transfer) / np.where(scale > 0, scale, 1.0)
        cons_err = np.maximum(cons_err, err)
        diag = entropy_production(fields, new, dt, grid, gas)
        fields = new
        result.steps += 1
        record(fields, dt, diag.min_production)
    fields.time = config.t_end if abs(fields.time - config.t_end) < 1e-12 * config.t_end else fields.time
    result.final = fields
    result.conservation_error = cons_err
    return result
