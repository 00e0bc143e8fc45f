from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..gas import DomainError, cons_to_prim_arrays


@dataclass(frozen=True)
class Grid2D:
    """Cells on ``[-Lx, Lx] x [0, 1)``, periodic in x2."""

    Lx: float
    Nx: int
    Ny: int

    def __post_init__(self):
        if not self.Lx > 0:
            raise DomainError(f"Lx must be positive, got {self.Lx!r}")
        if self.Nx < 4 or self.Ny < 4:
            raise DomainError(f"need Nx, Ny >= 4, got ({self.Nx}, {self.Ny})")

    @property
    def dx(self):
        return 2.0 * self.Lx / self.Nx

    @property
    def dy(self):
        return 1.0 / self.Ny

    @property
    def measure(self):
        return 2.0 * self.Lx

    @property
    def x1_centers(self):
        return -self.Lx + (np.arange(self.Nx) + 0.5) * self.dx

    @property
    def x2_centers(self):
        return (np.arange(self.Ny) + 0.5) * self.dy

    def to_dict(self):
        return {"Lx": self.Lx, "Nx": self.Nx, "Ny": self.Ny, "dx": self.dx, "dy": self.dy}


@dataclass
class FieldSet:
    """Cell averages ``q[k, i, j]`` of (rho, m1, m2, E_tot).

    ``farfield`` holds the conserved states imposed in the x1 ghost cells;
    when it is None the boundary cells are extrapolated.
    """

    grid: Grid2D
    q: np.ndarray
    farfield: tuple | None = None
    time: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.q = np.ascontiguousarray(self.q, dtype=np.float64)
        if self.q.shape != (4, self.grid.Nx, self.grid.Ny):
            raise DomainError(f"field shape {self.q.shape} does not match grid {self.grid}")

    def copy(self, q=None):
        return FieldSet(self.grid, self.q.copy() if q is None else q, self.farfield, self.time,
                        dict(self.meta))

    def totals(self):
        """Integrals of mass, both momenta and energy."""
        return self.q.sum(axis=(1, 2)) * (self.grid.dx * self.grid.dy)

    def primitives(self, c_v):
        return cons_to_prim_arrays(self.q, c_v)

    def check_admissible(self, c_v):
        """Index of the first cell with non-positive density or internal energy, else None."""
        rho, theta, _, _ = cons_to_prim_arrays(self.q, c_v)
        bad = ~((rho > 0) & (theta > 0) & np.isfinite(theta))
        if np.any(bad):
            return tuple(int(i) for i in np.argwhere(bad)[0])
        return None


@dataclass(frozen=True)
class SolverConfig:
    t_end: float
    cfl: float = 0.45
    snapshot_times: tuple = ()
    flux: str = "llf"
    reconstruction: str = "first"

    def __post_init__(self):
        if not 0 < self.cfl < 1:
            raise DomainError(f"cfl must lie in (0, 1), got {self.cfl!r}")
        if not self.t_end > 0:
            raise DomainError(f"t_end must be positive, got {self.t_end!r}")
        snaps = tuple(float(s) for s in self.snapshot_times)
        if list(snaps) != sorted(snaps) or any(s < 0 or s > self.t_end for s in snaps):
            raise DomainError("snapshot_times must be sorted and lie in [0, t_end]")
        object.__setattr__(self, "snapshot_times", snaps)
        if self.flux != "llf":
            raise DomainError(f"unsupported flux {self.flux!r} (only 'llf')")
        if self.reconstruction not in ("first", "second"):
            raise DomainError(f"reconstruction must be 'first' or 'second', got {self.reconstruction!r}")

    @property
    def order(self):
        return 1 if self.reconstruction == "first" else 2

    def to_dict(self):
        return {
            "t_end": self.t_end,
            "cfl": self.cfl,
            "snapshot_times": list(self.snapshot_times),
            "flux": self.flux,
            "reconstruction": self.reconstruction,
        }
