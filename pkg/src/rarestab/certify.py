"""Grid-scan certification of the inequalities behind the stability argument.

Each check returns a :class:`CertificationReport`; a failed claim is a report
with ``passed=False``, never an exception.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import energy
from .gas import DomainError, GasParams


@dataclass(frozen=True)
class ScanSpec:
    y_range: tuple = (1e-3, 1e2, 2001)
    z_range: tuple = (0.0, 50.0, 2001)
    c_v_list: tuple = (0.5, 1.0, 1.5, 2.5)
    n_random: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        ymin, ymax, ny = self.y_range
        zmin, zmax, nz = self.z_range
        if not (0 < ymin < ymax and math.isfinite(ymax)):
            raise DomainError(f"y range must satisfy 0 < min < max, got {self.y_range}")
        if not (0 <= zmin < zmax and math.isfinite(zmax)):
            raise DomainError(f"z range must satisfy 0 <= min < max, got {self.z_range}")
        if int(ny) < 2 or int(nz) < 2:
            raise DomainError("scan point counts must be >= 2")
        if not self.c_v_list or any(not (c > 0) for c in self.c_v_list):
            raise DomainError(f"c_v values must be positive, got {self.c_v_list}")
        if int(self.n_random) < 1:
            raise DomainError("n_random must be >= 1")

    @classmethod
    def from_dict(cls, d):
        kw = {}
        for key in ("y_range", "z_range", "c_v_list"):
            if key in d:
                kw[key] = tuple(d[key])
        for key in ("n_random", "seed"):
            if key in d:
                kw[key] = int(d[key])
        unknown = set(d) - {"y_range", "z_range", "c_v_list", "n_random", "seed"}
        if unknown:
            raise DomainError(f"unknown scan spec keys: {sorted(unknown)}")
        return cls(**kw)

    def y_grid(self):
        lo, hi, n = self.y_range
        return np.logspace(math.log10(lo), math.log10(hi), int(n))

    def z_grid(self):
        lo, hi, n = self.z_range
        return np.linspace(lo, hi, int(n))


@dataclass
class CertificationReport:
    claim: str
    max_value: float
    argmax: object
    tolerance: float
    passed: bool
    samples: int
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


def certify_G_nonpositive(spec: ScanSpec = ScanSpec(), tol=1e-10, G=None) -> CertificationReport:
    """Scan G over the product grid for every configured c_v.

    Besides ``max G <= tol``, requires the maximizer to sit within one grid
    cell of ``(1, 0)`` whenever ``y = 1`` lies in the scanned range, that
    ``y = 1`` is the only zero on the ``z = 0`` line, and that G drops below
    -1e3 far out on both ends of the y axis.
    """
    G = G or energy.G_function
    y = spec.y_grid()
    z = spec.z_grid()
    dlogy = math.log(y[1] / y[0])
    dz = z[1] - z[0]
    best = -math.inf
    best_at = None
    failures = []
    samples = 0
    for c_v in spec.c_v_list:
        gas = GasParams(c_v)
        vals = G(y[:, None], z[None, :], gas)
        samples += vals.size
        i, j = np.unravel_index(np.argmax(vals), vals.shape)
        vmax = float(vals[i, j])
        if vmax > best:
            best, best_at = vmax, (float(y[i]), float(z[j]), c_v)
        if y[0] <= 1.0 <= y[-1] and z[0] == 0.0:
            near = abs(math.log(y[i])) <= dlogy * (1 + 1e-9) and z[j] <= dz * (1 + 1e-9)
            if not near:
                failures.append(f"c_v={c_v}: argmax at ({y[i]:.6g}, {z[j]:.6g}) not next to (1, 0)")
        if z[0] == 0.0:
            line = vals[:, 0]
            off = np.abs(y - 1.0) > 1e-6
            if np.any(line[off] >= 0):
                k = int(np.flatnonzero(off & (line >= 0))[0])
                failures.append(f"c_v={c_v}: G(y,0) >= 0 at y={y[k]:.6g}")
        far = G(np.array([1e-12, 1e12]), np.array([0.0, 0.0]), gas)
        if np.any(far >= -1e3):
            failures.append(f"c_v={c_v}: G does not decay at the y extremes ({far.tolist()})")
    passed = best <= tol and not failures
    return CertificationReport(
        "G_nonpositive", best, _jsonable(best_at), tol, passed, samples,
        {"failures": failures, "c_v_list": list(spec.c_v_list)},
    )


def critical_point_check(z_values, gas: GasParams, tol=1e-12, G=None) -> CertificationReport:
    """Verify the y-critical point of G, its closed-form value and its sign.

    Also checks that the interior critical-point equation
    ``exp(c_v z/(c_v+1)) = 1 + c_v z/(2(c_v+1))`` has a strictly positive
    residual for every ``z > 0``, so G has no critical point with ``z > 0``.
    Tolerances are relative to the magnitude of the compared quantities.
    """
    G = G or energy.G_function
    z = np.asarray(z_values, dtype=float)
    if np.any(z < 0):
        raise DomainError("z values must be non-negative")
    c_v = gas.c_v
    y_star = np.exp(-z / (c_v + 1.0))
    dGy, _ = energy.G_grad(y_star, z, gas)
    grad_err = np.abs(dGy) / np.exp(z)
    closed = energy.G_critical_value(z, gas)
    direct = G(y_star, z, gas)
    value_err = np.abs(direct - closed) / np.maximum(1.0, np.abs(closed))
    k = c_v / (c_v + 1.0)
    residual = np.expm1(k * z) - 0.5 * k * z
    failures = []
    bad = np.flatnonzero(grad_err > tol)
    if bad.size:
        failures.append(f"dG/dy != 0 at y* for z={z[bad[0]]:.6g}")
    bad = np.flatnonzero(value_err > tol)
    if bad.size:
        failures.append(f"critical value mismatch at z={z[bad[0]]:.6g}")
    bad = np.flatnonzero(closed > tol)
    if bad.size:
        failures.append(f"positive critical value at z={z[bad[0]]:.6g}")
    bad = np.flatnonzero((z > 0) & ~(residual > 0))
    if bad.size:
        failures.append(f"interior critical point possible at z={z[bad[0]]:.6g}")
    worst = int(np.argmax(closed))
    return CertificationReport(
        "critical_point", float(closed[worst]), float(z[worst]), tol, not failures, int(z.size),
        {
            "failures": failures,
            "c_v": c_v,
            "max_grad_err": float(grad_err.max()),
            "max_value_err": float(value_err.max()),
        },
    )


def slope_relation_check(sol, n_samples=10_000, tol=1e-10) -> CertificationReport:
    """Check ``(Theta'/U')^2 = Theta / (c_v (c_v + 1))`` strictly inside each fan."""
    gas = sol.gas
    worst, worst_at, count = 0.0, None, 0
    for lo, hi in (sol.fan1, sol.fan2):
        if not hi > lo:
            continue
        # open interval: drop the end points
        xi = np.linspace(lo, hi, n_samples + 2)[1:-1]
        _, theta, _ = sol.sample_arrays(xi)
        _, dT, dU = sol.derivatives(xi)
        target = theta / (gas.c_v * (gas.c_v + 1.0))
        err = np.abs((dT / dU) ** 2 - target) / target
        k = int(np.argmax(err))
        count += xi.size
        if err[k] >= worst:
            worst, worst_at = float(err[k]), float(xi[k])
    return CertificationReport(
        "slope_relation", worst, worst_at, tol, worst <= tol, count, {}
    )


def monotone_U_check(sol, n_samples=100_001, tol=1e-12, sampler=None) -> CertificationReport:
    """U must be non-decreasing across the whole wave pattern."""
    sampler = sampler or sol.sample_arrays
    xi = np.linspace(sol.fan1[0] - 1.0, sol.fan2[1] + 1.0, n_samples)
    _, _, u = sampler(xi)
    du = np.diff(u)
    k = int(np.argmin(du))
    # report the largest decrease as the "value" to keep below tol
    worst = float(-du[k])
    return CertificationReport(
        "monotone_U", worst, float(xi[k]), tol, worst <= tol, int(xi.size), {}
    )


def young_terms(rho, ds, du, T_x, U_x):
    lhs = rho * ds * du * T_x
    rhs = 0.25 * rho * ds * ds * T_x * T_x / U_x + rho * du * du * U_x
    return lhs, rhs


def young_inequality_check(n_random=1_000_000, seed=0, tol=1e-12) -> CertificationReport:
    """Randomized check of the Young bound on the entropy cross term."""
    rng = np.random.default_rng(seed)
    n = int(n_random)
    rho = np.exp(rng.uniform(-5, 5, n))
    ds = np.exp(rng.uniform(-8, 4, n)) * (rng.random(n) > 0.05)
    u1 = rng.normal(0, 3, n)
    U = rng.normal(0, 3, n)
    T_x = rng.normal(0, 1, n) * np.exp(rng.uniform(-4, 4, n))
    U_x = np.exp(rng.uniform(-8, 4, n))
    lhs, rhs = young_terms(rho, ds, u1 - U, T_x, U_x)
    scale = np.abs(lhs) + np.abs(rhs) + 1.0
    excess = (lhs - rhs) / scale
    k = int(np.argmax(excess))
    worst = float(excess[k])
    return CertificationReport(
        "young_inequality", worst,
        {"rho": rho[k], "s_minus_S": ds[k], "u1": u1[k], "U": U[k], "dTheta_dx": T_x[k], "dU_dx": U_x[k]},
        tol, worst <= tol, n, {"seed": seed},
    )


def certify_F_nonpositive(R_values=(0.1, 1.0, 10.0), Theta_values=(0.1, 1.0, 10.0),
                          rho_grid=None, s_grid=None, gas: GasParams = GasParams(),
                          tol=1e-10) -> CertificationReport:
    """Scan F over densities and entropies for every reference (R, Theta).

    ``rho_grid`` is relative to R and ``s_grid`` is the entropy excess
    ``s - S``; the defaults span ``[1e-3, 1e3]`` and ``[0, 50]``.
    """
    rel_rho = np.logspace(-3, 3, 1201) if rho_grid is None else np.asarray(rho_grid, float)
    ds = np.linspace(0.0, 50.0, 1001) if s_grid is None else np.asarray(s_grid, float)
    if np.any(rel_rho <= 0):
        raise DomainError("density grid must be positive")
    if np.any(ds < 0):
        raise DomainError("entropy excess grid must be non-negative")
    best, best_at, samples = -math.inf, None, 0
    for R in R_values:
        for Theta in Theta_values:
            S = float(gas.entropy(R, Theta))
            F = energy.F_function(R * rel_rho[:, None], S + ds[None, :], R, Theta, gas)
            samples += F.size
            scaled = F / Theta
            i, j = np.unravel_index(np.argmax(scaled), scaled.shape)
            if scaled[i, j] > best:
                best = float(scaled[i, j])
                best_at = (float(R * rel_rho[i]), float(S + ds[j]), R, Theta)
    return CertificationReport(
        "F_nonpositive", best, best_at, tol, best <= tol, samples, {"c_v": gas.c_v}
    )


def certify_all(spec: ScanSpec = ScanSpec(), G=None):
    """Run every certification; the slope and monotonicity checks use a reference fan."""
    from .riemann import RiemannData, solve_shock_free

    reports = [certify_G_nonpositive(spec, G=G)]
    crit = [critical_point_check(spec.z_grid(), GasParams(c), G=G) for c in spec.c_v_list]
    worst = max(crit, key=lambda r: r.max_value)
    reports.append(CertificationReport(
        "critical_point", worst.max_value, worst.argmax, worst.tolerance,
        all(r.passed for r in crit), sum(r.samples for r in crit),
        {"per_c_v": [r.to_dict() for r in crit]},
    ))
    reports.append(
        max((certify_F_nonpositive(gas=GasParams(c)) for c in spec.c_v_list),
            key=lambda r: (not r.passed, r.max_value))
    )
    reports.append(young_inequality_check(spec.n_random, spec.seed))
    for c in spec.c_v_list:
        gas = GasParams(c)
        data = RiemannData.from_triples((1.0, 1.0, 0.0), (1.0, 1.0, 0.5))
        sol = solve_shock_free(data, gas)
        for rep in (slope_relation_check(sol), monotone_U_check(sol)):
            rep.details["c_v"] = c
            reports.append(rep)
    return reports
