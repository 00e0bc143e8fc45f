"""Run configuration parsing and result files (CSV, raw snapshots, manifests)."""
from __future__ import annotations

import csv
import json
import math
import os
import shutil
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fv.grid import Grid2D, SolverConfig
from .gas import DomainError, GasParams
from .riemann import RiemannData

SNAPSHOT_VARIABLES = ("rho", "m1", "m2", "E_tot")


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass
class RunConfig:
    gas: GasParams
    data: RiemannData
    grid: Grid2D
    solver: SolverConfig
    perturbation: dict | None = None
    output: str | None = None

    @classmethod
    def from_dict(cls, d):
        try:
            gas = GasParams(float(d.get("gas", {}).get("c_v", 1.5)))
            r = d["riemann"]
            data = RiemannData.from_triples(_triple(r["left"]), _triple(r["right"]))
            g = d["grid"]
            grid = Grid2D(float(g["Lx"]), int(g["Nx"]), int(g.get("Ny", 8)))
            s = d["solver"]
            solver = SolverConfig(
                t_end=float(s["t_end"]),
                cfl=float(s.get("cfl", 0.45)),
                snapshot_times=tuple(s.get("snapshot_times", ())),
                flux=s.get("flux", "llf"),
                reconstruction=s.get("reconstruction", "first"),
            )
            pert = d.get("perturbation")
            if pert is not None:
                unknown = set(pert) - {"amplitude", "mode", "width_cells"}
                if unknown:
                    raise ConfigError(f"unknown perturbation keys {sorted(unknown)}")
                pert = {
                    "amplitude": float(pert.get("amplitude", 0.0)),
                    "mode": int(pert.get("mode", 1)),
                    "width_cells": float(pert.get("width_cells", 4)),
                }
        except KeyError as exc:
            raise ConfigError(f"missing configuration key {exc}") from None
        except (TypeError, ValueError, DomainError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from None
        return cls(gas, data, grid, solver, pert, d.get("output"))

    def with_grid(self, Nx):
        return RunConfig(self.gas, self.data, Grid2D(self.grid.Lx, Nx, self.grid.Ny), self.solver,
                         self.perturbation, self.output)

    def to_dict(self):
        out = {
            "gas": {"c_v": self.gas.c_v},
            "riemann": self.data.to_dict(),
            "grid": {"Lx": self.grid.Lx, "Nx": self.grid.Nx, "Ny": self.grid.Ny},
            "solver": self.solver.to_dict(),
        }
        if self.perturbation is not None:
            out["perturbation"] = dict(self.perturbation)
        if self.output is not None:
            out["output"] = self.output
        return out


def _triple(v):
    if len(v) != 3:
        raise ConfigError(f"Riemann state must be [rho, theta, u], got {v!r}")
    return tuple(float(x) for x in v)


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


def load_run_config(path) -> RunConfig:
    return RunConfig.from_dict(load_json(path))


# ---- writers ------------------------------------------------------------------------

def fmt(x):
    if isinstance(x, str):
        return x
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            if isinstance(row, dict):
                row = [row[c] for c in columns]
            w.writerow([fmt(v) for v in row])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_json_atomic(path, obj):
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    os.replace(tmp, path)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def write_snapshot(directory, index, t, q):
    """Write each conserved variable as raw little-endian float64, i fastest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    _, nx, ny = q.shape
    paths = []
    for k, name in enumerate(SNAPSHOT_VARIABLES):
        stem = f"snap_{index:04d}_{name}"
        data = np.asarray(q[k], dtype="<f8").ravel(order="F")
        (directory / f"{stem}.bin").write_bytes(data.tobytes())
        header = {
            "variable": name,
            "time": float(t),
            "Nx": nx,
            "Ny": ny,
            "dtype": "float64",
            "byte_order": "little",
            "layout": "row-major over (i, j) with i fastest",
            "file": f"{stem}.bin",
        }
        write_json_atomic(directory / f"{stem}.json", header)
        paths.append(directory / f"{stem}.bin")
    return paths


def read_snapshot(bin_path):
    bin_path = Path(bin_path)
    header = json.loads(bin_path.with_suffix(".json").read_text())
    dtype = "<f8" if header["byte_order"] == "little" else ">f8"
    flat = np.frombuffer(bin_path.read_bytes(), dtype=dtype)
    return header, flat.reshape((header["Nx"], header["Ny"]), order="F")


def prepare_output(path, force=False):
    """Create a fresh run directory.

    An existing directory is replaced only with ``force`` and only if it
    holds a previous run (a ``manifest.json`` or ``convergence.csv``).
    """
    path = Path(path)
    if path.exists():
        if not force:
            raise FileExistsError(f"output directory {path} exists (use --force)")
        if any(path.iterdir()) and not (
            (path / "manifest.json").exists() or (path / "convergence.csv").exists()
        ):
            raise FileExistsError(f"{path} is not empty and does not look like a run directory")
        shutil.rmtree(path)
    path.mkdir(parents=True)
    return path


def tool_info():
    from . import __version__
    from .fv import backend

    return {
        "name": "rarestab",
        "version": __version__,
        "backend": backend.get().NAME,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
    }
