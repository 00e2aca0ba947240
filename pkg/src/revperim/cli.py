"""Command-line entry point ``revperim``.

Exit codes: 0 success, 2 invalid input, 3 solver or verification failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time

from . import __version__
from .disk_solver import lambda_table, solve_disk
from .errors import ContainerError, DegeneracyError, DomainError, InfeasibleError, OptimizationError
from .geometry import UnitDisk, load_container
from .optimizer import OptimizationConfig, maximize
from .oracle import brute_force_disk, gradient_check
from .svg import disk_polygon_vertices, lambda_map_svg, shape_svg

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3


class _InputError(Exception):
    pass


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, shortest round-trip float repr."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def container_hash(container) -> str:
    canon = json.dumps(container.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _write(path, text, outputs):
    with open(path, "w", newline="") as fh:
        fh.write(text)
    outputs.append(path)


def _load(path):
    try:
        return load_container(path)
    except OSError as exc:
        raise _InputError("cannot read container spec: %s" % exc) from exc
    except ValueError as exc:
        raise _InputError("invalid container spec: %s" % exc) from exc


# --- commands ----------------------------------------------------------------

def cmd_disk(args, out, outputs):
    sol = solve_disk(args.area)
    if args.json:
        out.write(dumps(sol.to_json()))
    elif args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        row = sol.to_json()
        w.writerow(list(row))
        w.writerow([repr(v) if isinstance(v, float) else v for v in row.values()])
        out.write(buf.getvalue())
    else:
        out.write("m=%d theta1=%.15g theta_rest=%.15g perimeter=%.15g is_regular=%s\n"
                  % (sol.m, sol.theta1, sol.theta_rest, sol.perimeter, sol.is_regular))
    if args.svg:
        verts = disk_polygon_vertices(sol.angles().angles)
        _write(args.svg, shape_svg(UnitDisk(), verts, "area %g, m = %d" % (args.area, sol.m)), outputs)
    return EXIT_OK, UnitDisk()


def cmd_lambda_map(args, out, outputs):
    table = lambda_table(args.m_max, args.samples)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "theta", "lambda"])
    for m, theta, lam in table:
        w.writerow([int(m), repr(float(theta)), repr(float(lam))])
    if args.csv:
        _write(args.csv, buf.getvalue(), outputs)
    else:
        out.write(buf.getvalue())
    if args.svg:
        _write(args.svg, lambda_map_svg(table), outputs)
    return EXIT_OK, None


def cmd_container(args, out, outputs):
    container = _load(args.spec)
    cfg = OptimizationConfig(restarts=args.restarts, seed=args.seed)
    run = maximize(container, args.area, args.vertices, cfg)
    doc = dumps(run.to_json())
    if args.json:
        _write(args.json, doc, outputs)
        out.write("perimeter=%.15g pruned_vertices=%d accepted=%d/%d\n" % (
            run.perimeter, run.pruned.n,
            sum(p is not None for p in run.per_restart_perimeters), run.restarts_used))
    else:
        out.write(doc)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["restart", "perimeter", "area_residual", "kkt_residual", "iterations", "accepted"])
        for r in run.records:
            w.writerow([r.index, repr(r.perimeter), repr(r.area_residual), repr(r.kkt_residual),
                        r.iterations, int(r.accepted)])
        _write(args.csv, buf.getvalue(), outputs)
    if args.svg:
        title = "area %g, %d vertices" % (args.area, run.pruned.n)
        _write(args.svg, shape_svg(container, run.pruned.vertices(), title), outputs)
    return EXIT_OK, container


def cmd_oracle_disk(args, out, outputs):
    rep = brute_force_disk(args.area, args.sides, args.resolution)
    out.write(dumps(rep.to_json()))
    return EXIT_OK, UnitDisk()


def cmd_oracle_gradcheck(args, out, outputs):
    container = _load(args.spec)
    rep = gradient_check(container, args.samples, args.seed)
    out.write(dumps(rep.to_json()))
    return (EXIT_OK if rep.passed else EXIT_SOLVER), container


# --- parser ------------------------------------------------------------------

def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="revperim", description="Maximal-perimeter convex sets of given area in a convex container.")
    p.add_argument("--version", action="version", version="%(prog)s " + __version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", metavar="PATH", help="write a JSON run manifest")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("disk", help="exact optimum inside the unit disk", parents=[common])
    d.add_argument("--area", type=float, required=True)
    fmt = d.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="print JSON")
    fmt.add_argument("--csv", action="store_true", help="print CSV")
    d.add_argument("--svg", metavar="PATH")
    d.set_defaults(func=cmd_disk)

    lm = sub.add_parser("lambda-map", help="critical multipliers of each side-count branch", parents=[common])
    lm.add_argument("--m-max", type=int, default=10)
    lm.add_argument("--samples", type=int, default=200)
    lm.add_argument("--csv", metavar="PATH")
    lm.add_argument("--svg", metavar="PATH")
    lm.set_defaults(func=cmd_lambda_map)

    c = sub.add_parser("container", help="numerical optimum inside a general container", parents=[common])
    c.add_argument("--spec", required=True, metavar="PATH")
    c.add_argument("--area", type=float, required=True)
    c.add_argument("--vertices", type=int, required=True)
    c.add_argument("--restarts", type=_positive_int, default=20)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--json", metavar="PATH")
    c.add_argument("--svg", metavar="PATH")
    c.add_argument("--csv", metavar="PATH", help="per-restart trace")
    c.set_defaults(func=cmd_container)

    o = sub.add_parser("oracle", help="independent verifiers")
    osub = o.add_subparsers(dest="oracle_command", required=True)
    od = osub.add_parser("disk", help="grid search over central angles", parents=[common])
    od.add_argument("--area", type=float, required=True)
    od.add_argument("--sides", type=int, required=True)
    od.add_argument("--resolution", type=float, default=1e-3)
    od.set_defaults(func=cmd_oracle_disk)
    og = osub.add_parser("gradcheck", help="analytic vs finite-difference gradients", parents=[common])
    og.add_argument("--spec", required=True, metavar="PATH")
    og.add_argument("--samples", type=_positive_int, default=100)
    og.add_argument("--seed", type=int, default=0)
    og.set_defaults(func=cmd_oracle_gradcheck)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    outputs: list = []
    start = time.perf_counter()
    container = None
    try:
        code, container = args.func(args, out, outputs)
    except (_InputError, DomainError, InfeasibleError, ContainerError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        code = EXIT_INPUT
    except (OptimizationError, DegeneracyError) as exc:
        print("solver failure: %s" % exc, file=sys.stderr)
        code = EXIT_SOLVER
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        code = EXIT_INPUT
    if args.manifest:
        manifest = {
            "command_line": ["revperim"] + list(sys.argv[1:] if argv is None else argv),
            "seed": getattr(args, "seed", None),
            "version": __version__,
            "container_hash": container_hash(container) if container is not None else None,
            "wall_time_seconds": time.perf_counter() - start,
            "exit_code": code,
            "outputs": outputs + [args.manifest],
        }
        with open(args.manifest, "w") as fh:
            fh.write(dumps(manifest))
    return code


if __name__ == "__main__":
    sys.exit(main())
