"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py --nx 256 --ny 64 --repeat 20
"""
import argparse
import time

import numpy as np

from rarestab import GasParams, RiemannData
from rarestab.fv import Grid2D, SolverConfig, available_backends, get_backend, run
from rarestab.fv.solver import NG, extend, initialize_perturbed


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_residual(name, fields, gas, order, repeat):
    k = get_backend(name)
    qe = extend(fields)
    res = np.empty_like(fields.q)
    bflux = np.empty((2, 4, fields.grid.Ny))
    g = fields.grid
    return best_of(lambda: k.residual(qe, NG, g.dx, g.dy, gas.gamma, order, res, bflux), repeat)


def bench_run(name, nx, ny, gas, data, order):
    cfg = SolverConfig(0.2, reconstruction="first" if order == 1 else "second")
    t0 = time.perf_counter()
    res = run(Grid2D(1.0, nx, ny), cfg, data, gas, perturbation={"amplitude": 0.01, "mode": 2},
              kernels=get_backend(name))
    return time.perf_counter() - t0, res.steps


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--nx", type=int, default=256)
    p.add_argument("--ny", type=int, default=64)
    p.add_argument("--repeat", type=int, default=20)
    p.add_argument("--run-nx", type=int, default=128, help="grid for the full-run timing")
    args = p.parse_args(argv)

    gas = GasParams(1.5)
    data = RiemannData.from_triples((1.0, 1.0, 0.0), (1.0, 1.0, 0.5))
    grid = Grid2D(1.0, args.nx, args.ny)
    fields = initialize_perturbed(grid, data, gas, amplitude=0.05, mode=2)
    names = available_backends()
    print(f"backends: {', '.join(names)}")
    print(f"residual on {args.nx}x{args.ny}, best of {args.repeat}")
    base = {}
    for order in (1, 2):
        for name in names:
            t = bench_residual(name, fields, gas, order, args.repeat)
            base.setdefault(order, {})[name] = t
            print(f"  order {order}  {name:7s} {t * 1e3:9.3f} ms")
    print(f"full run to t=0.2 on {args.run_nx}x8")
    for order in (1, 2):
        for name in names:
            t, steps = bench_run(name, args.run_nx, 8, gas, data, order)
            print(f"  order {order}  {name:7s} {t:8.3f} s  ({steps} steps)")
    if "cython" in names:
        for order, d in base.items():
            print(f"residual speed-up, order {order}: {d['python'] / d['cython']:.1f}x")


if __name__ == "__main__":
    main()
