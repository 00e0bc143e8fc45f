"""Command line entry point: ``rarestab {run,certify,converge,sample}``.

Exit codes: 0 success, 1 certification failure, 2 invalid input,
3 precondition or guard failure, 4 runtime abort.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import certify, io
from .fv import GuardViolation, StepAbort, run as fv_run
from .fv.solver import SERIES_COLUMNS
from .gas import DomainError
from .riemann import RiemannError, sample_field, solve_shock_free

EXIT_OK, EXIT_CERT, EXIT_INPUT, EXIT_GUARD, EXIT_ABORT = 0, 1, 2, 3, 4

log = logging.getLogger("rarestab")


def _fail(code, msg):
    print(f"error: {msg}", file=sys.stderr)
    return code


def execute_run(cfg: io.RunConfig, out: Path):
    """Run one configuration into ``out`` (which must exist); returns the manifest."""
    manifest = {
        "config": cfg.to_dict(),
        "tool": io.tool_info(),
        "status": "running",
        "started": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    sol = solve_shock_free(cfg.data, cfg.gas)
    manifest["exact_solution"] = sol.to_dict()
    io.write_json_atomic(out / "manifest.json", manifest)
    snap_dir = out / "snapshots"
    t0 = time.perf_counter()
    try:
        result = fv_run(
            cfg.grid, cfg.solver, cfg.data, cfg.gas, perturbation=cfg.perturbation,
            on_snapshot=lambda k, s: io.write_snapshot(snap_dir, k, s.t, s.fields.q),
        )
    except StepAbort as exc:
        manifest.update(status="aborted", error=str(exc), wall_clock=time.perf_counter() - t0)
        io.write_json_atomic(out / "manifest.json", manifest)
        raise
    io.write_csv(out / "series.csv", SERIES_COLUMNS, result.series)
    final = result.series[-1]
    manifest.update(
        status="ok",
        wall_clock=time.perf_counter() - t0,
        steps=result.steps,
        final={k: final[k] for k in SERIES_COLUMNS},
        s_min=result.s_min,
        conservation_max_rel_error=result.conservation_error.tolist(),
        snapshots=[s.t for s in result.snapshots],
    )
    io.write_json_atomic(out / "manifest.json", manifest)
    return manifest, result


def _load(path):
    try:
        return io.load_run_config(path), None
    except io.ConfigError as exc:
        return None, _fail(EXIT_INPUT, str(exc))


def _precheck(cfg):
    from .fv import check_guard

    sol = solve_shock_free(cfg.data, cfg.gas)
    check_guard(cfg.grid, cfg.solver, sol)
    return sol


def cmd_run(args):
    cfg, err = _load(args.config)
    if err is not None:
        return err
    try:
        _precheck(cfg)
    except (RiemannError, GuardViolation) as exc:
        return _fail(EXIT_GUARD, f"{type(exc).__name__}: {exc}")
    out = args.out or cfg.output
    if not out:
        return _fail(EXIT_INPUT, "no output directory (use --out or 'output' in the config)")
    try:
        out = io.prepare_output(out, args.force)
    except FileExistsError as exc:
        return _fail(EXIT_INPUT, str(exc))
    try:
        manifest, _ = execute_run(cfg, out)
    except StepAbort as exc:
        return _fail(EXIT_ABORT, str(exc))
    log.info("run finished in %.2fs, %d steps -> %s", manifest["wall_clock"], manifest["steps"], out)
    return EXIT_OK


def cmd_certify(args):
    try:
        spec = certify.ScanSpec.from_dict(io.load_json(args.config)) if args.config else certify.ScanSpec()
    except (io.ConfigError, DomainError, TypeError, ValueError) as exc:
        return _fail(EXIT_INPUT, f"invalid scan spec: {exc}")
    reports = certify.certify_all(spec)
    payload = [r.to_dict() for r in reports]
    text = json.dumps(payload, indent=2, default=io._json_default)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "certification.json").write_text(text + "\n")
    else:
        print(text)
    for r in reports:
        log.info("%-18s %s  max=%.3e", r.claim, "PASS" if r.passed else "FAIL", r.max_value)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CERT


CONVERGENCE_VARS = ("rho", "theta", "u1", "u2")


def observed_orders(errors, hs):
    """Orders between consecutive levels; "NA" where undefined (zero errors)."""
    orders = ["NA"]
    for k in range(1, len(errors)):
        e0, e1 = errors[k - 1], errors[k]
        if e0 > 0 and e1 > 0:
            orders.append(math.log(e0 / e1) / math.log(hs[k - 1] / hs[k]))
        else:
            orders.append("NA")
    return orders


def cmd_converge(args):
    cfg, err = _load(args.config)
    if err is not None:
        return err
    if args.levels < 3:
        return _fail(EXIT_INPUT, "--levels must be >= 3")
    try:
        _precheck(cfg)
    except (RiemannError, GuardViolation) as exc:
        return _fail(EXIT_GUARD, f"{type(exc).__name__}: {exc}")
    out = args.out or cfg.output
    if not out:
        return _fail(EXIT_INPUT, "no output directory (use --out or 'output' in the config)")
    try:
        out = io.prepare_output(out, args.force)
    except FileExistsError as exc:
        return _fail(EXIT_INPUT, str(exc))
    levels = [cfg.with_grid(cfg.grid.Nx * 2**k) for k in range(args.levels)]

    def one(k):
        sub = out / f"level_{k}"
        sub.mkdir()
        return execute_run(levels[k], sub)

    threads = args.threads or os.cpu_count() or 1
    try:
        with ThreadPoolExecutor(max_workers=max(1, min(threads, len(levels)))) as pool:
            results = list(pool.map(one, range(len(levels))))
    except StepAbort as exc:
        return _fail(EXIT_ABORT, str(exc))
    hs = [lv.grid.dx for lv in levels]
    finals = [m["final"] for m, _ in results]
    errs = {v: [f[f"l1_{v}"] for f in finals] for v in CONVERGENCE_VARS}
    orders = {v: observed_orders(errs[v], hs) for v in CONVERGENCE_VARS}
    cols = ["level", "Nx", "h"] + [f"l1_{v}" for v in CONVERGENCE_VARS] + ["E_total"] + [
        f"order_{v}" for v in CONVERGENCE_VARS
    ]
    rows = []
    for k, lv in enumerate(levels):
        rows.append(
            [k, lv.grid.Nx, hs[k]] + [errs[v][k] for v in CONVERGENCE_VARS] + [finals[k]["E_total"]]
            + [orders[v][k] for v in CONVERGENCE_VARS]
        )
    io.write_csv(out / "convergence.csv", cols, rows)
    return EXIT_OK


def cmd_sample(args):
    cfg, err = _load(args.config)
    if err is not None:
        return err
    if args.t < 0:
        return _fail(EXIT_INPUT, "t must be non-negative")
    try:
        sol = solve_shock_free(cfg.data, cfg.gas)
    except RiemannError as exc:
        return _fail(EXIT_GUARD, f"{type(exc).__name__}: {exc}")
    lo = -cfg.grid.Lx if args.xmin is None else args.xmin
    hi = cfg.grid.Lx if args.xmax is None else args.xmax
    x = np.linspace(lo, hi, args.points)
    R, T, U = sample_field(sol, args.t, x)
    gas = cfg.gas
    rows = zip(x, R, T, U, gas.pressure(R, T), gas.entropy(R, T))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    io.write_csv(out, ["x1", "R", "Theta", "U", "p", "s"], rows)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="rarestab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    # also accepted after the subcommand; SUPPRESS keeps it from resetting the top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", parents=[common], help="single finite-volume run")
    r.add_argument("--config", required=True)
    r.add_argument("--out")
    r.add_argument("--force", action="store_true")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("certify", parents=[common], help="numerically certify the inequalities")
    c.add_argument("--config", help="JSON scan spec; defaults when omitted")
    c.add_argument("--out")
    c.set_defaults(func=cmd_certify)

    v = sub.add_parser("converge", parents=[common], help="mesh refinement study")
    v.add_argument("--config", required=True)
    v.add_argument("--levels", type=int, default=4)
    v.add_argument("--out")
    v.add_argument("--force", action="store_true")
    v.add_argument("--threads", type=int, default=0, help="0 = one per CPU")
    v.set_defaults(func=cmd_converge)

    s = sub.add_parser("sample", parents=[common], help="exact solution profile as CSV")
    s.add_argument("--config", required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--out", required=True, help="CSV file")
    s.add_argument("--points", type=int, default=401)
    s.add_argument("--xmin", type=float)
    s.add_argument("--xmax", type=float)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
