"""Command line: ``dgader run CONFIG`` and ``dgader converge CONFIG --meshes 20,40,80``."""

import argparse
import logging
import os
import sys

from . import io
from .driver import convergence_study, run_simulation
from .config import load_config
from .errors import ConfigError, DGError

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2


def _parse_meshes(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as err:
        raise ConfigError(f"--meshes: {err}") from err


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dgader", description="1D DG solvers for hyperbolic conservation laws")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate one configuration to t_end")
    run.add_argument("config")
    converge = sub.add_parser("converge", help="mesh-refinement study with observed orders")
    converge.add_argument("config")
    converge.add_argument("--meshes", default=None,
                          help="comma-separated doubling element counts, e.g. 20,40,80,160")
    for p in (run, converge):
        p.add_argument("--output-dir", default=None)
        p.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    say = (lambda *a: None) if args.quiet else print
    try:
        cfg = load_config(args.config)
        if args.command == "converge":
            meshes = _parse_meshes(args.meshes) if args.meshes else list(cfg.meshes)
            if not meshes:
                raise ConfigError("no mesh list: pass --meshes or set 'meshes' in the config")
            if any(b != 2 * a for a, b in zip(meshes, meshes[1:])):
                raise ConfigError(f"mesh list must double at every entry, got {meshes}")
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    out = args.output_dir or cfg.output_dir
    try:
        if args.command == "run":
            sol, diag = run_simulation(cfg, output_dir=out)
            say(f"t={sol.t:.6g} steps={diag.steps} retries={diag.retries} "
                f"cells_limited={diag.cells_limited} min_theta={diag.min_theta:.6g} "
                f"drift={max(diag.conservation_drift):.3e}")
        else:
            table = convergence_study(cfg, meshes)
            if out:
                os.makedirs(out, exist_ok=True)
                io.write_error_table(os.path.join(out, f"{cfg.prefix}_errors.csv"), table)
            say(",".join(io.ERROR_HEADER))
            for r in table.rows:
                say(",".join([str(r.N)] + [f"{v:.6e}" if v is not None else ""
                                           for v in (r.L1, r.L2, r.Linf, r.order_L1,
                                                     r.order_L2, r.order_Linf)]))
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (DGError, ValueError, FloatingPointError) as err:
        print(f"solver error: {err}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK
