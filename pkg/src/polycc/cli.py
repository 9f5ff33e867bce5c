"""Command-line interface: ``polycc <command> ...``.

Exit codes: 0 success, 1 a check/certification/suite found a violation,
2 bad arguments, validation failure or I/O error. Output files are written to
a temporary sibling and renamed on success, with a ``.manifest.json`` beside
them recording the command and its parameters.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .collapse import integrate_release
from .conditions import condition_residual
from .errors import PolyccError
from .kernels import kernel_values
from .newtonian import DEFAULT_TOL, cc_residual
from .polygon import BodySystem, TwistedPolygonParams, admissible_twist, build_configuration
from .solver import (SCAN_FLOOR, EXCLUDE_RADIUS, certify_no_solution, default_workers,
                     solve_h, step_property_suite, write_scan_csv)


class UsageError(Exception):
    pass


def parse_theta(text, N):
    """``0`` and ``pi-over-n`` are exact; anything else is radians."""
    if text == "0":
        return 0.0
    if text.lower() in ("pi-over-n", "pi/n"):
        return math.pi / N
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"bad --theta {text!r}: use 0, pi-over-n or radians") from None


def parse_grid(text, geometric=False):
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise UsageError(f"bad grid {text!r}: expected lo:hi:steps") from None
    if steps < 1:
        raise UsageError(f"grid {text!r} needs at least one step")
    if geometric:
        if lo <= 0.0:
            raise UsageError(f"geometric grid {text!r} needs lo > 0")
        return np.geomspace(lo, hi, steps)
    return np.linspace(lo, hi, steps)


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".polycc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, text, manifest_params, seed=None):
    if args.out:
        _atomic_write(args.out, text)
        manifest = {"command": args.command, "params": manifest_params, "seed": seed,
                    "tool_version": __version__, "outputs": [os.path.basename(args.out)]}
        _atomic_write(args.out + ".manifest.json", json.dumps(manifest, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def _params_from_args(args):
    return TwistedPolygonParams(N=args.n, a=args.a, b=args.b, h=args.h,
                                theta=parse_theta(args.theta, args.n), m=args.m)


def cmd_build(args):
    params = _params_from_args(args)
    system = build_configuration(params)
    _emit(args, system.to_json(indent=2) + "\n", params.to_dict())
    return 0


def cmd_check(args):
    try:
        with open(args.file) as fh:
            system = BodySystem.from_json(fh.read())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from exc
    report = cc_residual(system, args.tol)
    out = report.to_dict()
    meta = system.meta
    if meta is not None and meta.h > 0.0:
        try:
            admissible_twist(meta.N, meta.theta)
        except PolyccError:
            pass
        else:
            out["conditions"] = condition_residual(meta).to_dict()
    _emit(args, json.dumps(out, indent=2) + "\n", {"file": args.file, "tol": args.tol})
    return 0 if report.is_central else 1


def cmd_kernels(args):
    theta = parse_theta(args.theta, args.n)
    kv = kernel_values(args.n, args.a, args.h, theta)
    _emit(args, json.dumps(kv.to_dict(), indent=2) + "\n", kv.to_dict())
    return 0


def cmd_solve(args):
    theta = parse_theta(args.theta, args.n)
    res = solve_h(args.n, theta, bracket=(args.h_lo, args.h_hi), h_max=args.h_max)
    _emit(args, json.dumps(res.to_dict(), indent=2) + "\n",
          {"N": args.n, "theta": theta, "bracket": [args.h_lo, args.h_hi], "h_max": args.h_max})
    return 0


def cmd_scan(args):
    theta = parse_theta(args.theta, args.n)
    a_grid = parse_grid(args.a_grid)
    b_grid = parse_grid(args.b_grid)
    h_grid = parse_grid(args.h_grid, geometric=args.h_spacing == "geom")
    workers = args.workers or default_workers()
    cells = certify_no_solution(args.n, theta, a_grid, b_grid, h_grid,
                                exclude=args.exclude, workers=workers)
    buf = io.StringIO()
    write_scan_csv(cells, buf)
    params = {"N": args.n, "theta": theta, "a_grid": args.a_grid, "b_grid": args.b_grid,
              "h_grid": args.h_grid, "h_spacing": args.h_spacing, "exclude": args.exclude,
              "floor": args.floor}
    _emit(args, buf.getvalue(), params)
    low = [c for c in cells if c.min_residual_over_h <= args.floor]
    for c in low:
        print(f"residual {c.min_residual_over_h:.3e} <= floor {args.floor:g} at "
              f"a={c.a:.17g} b={c.b:.17g} h={c.argmin_h:.17g}", file=sys.stderr)
    return 1 if low else 0


def cmd_collapse(args):
    try:
        with open(args.file) as fh:
            system = BodySystem.from_json(fh.read())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from exc
    report = integrate_release(system, args.t_end, args.dt)
    buf = io.StringIO()
    report.write_csv(buf)
    _emit(args, buf.getvalue(), {"file": args.file, "t_end": args.t_end, "dt": args.dt})
    return 0


def cmd_suite(args):
    report = step_property_suite(args.n_max, args.samples, seed=args.seed)
    _emit(args, json.dumps(report.to_dict(), indent=2) + "\n",
          {"n_max": args.n_max, "samples": args.samples}, seed=args.seed)
    if not report.ok:
        for name, bad in report.violations.items():
            for item in bad:
                print(f"{name}: {json.dumps(item)}", file=sys.stderr)
        return 1
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="polycc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"polycc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("--out", help="output file (default: standard output)")

    sp = sub.add_parser("build", help="write the body system of a twisted double polygon")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--h", type=float, required=True)
    sp.add_argument("--theta", required=True, help="0, pi-over-n, or radians")
    sp.add_argument("--m", type=float, default=1.0)
    out(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("check", help="central-configuration residual of a body system file")
    sp.add_argument("file")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    out(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("kernels", help="ring sums x, y, z")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--h", type=float, required=True)
    sp.add_argument("--theta", required=True)
    out(sp)
    sp.set_defaults(func=cmd_kernels)

    sp = sub.add_parser("solve", help="height of the equal-ring central configuration")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--theta", required=True)
    sp.add_argument("--h-lo", type=float, default=1e-3)
    sp.add_argument("--h-hi", type=float, default=1.0)
    sp.add_argument("--h-max", type=float, default=1e3)
    out(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("scan", help="residual scan over (a, b) cells")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--theta", required=True)
    sp.add_argument("--a-grid", required=True, metavar="LO:HI:STEPS")
    sp.add_argument("--b-grid", required=True, metavar="LO:HI:STEPS")
    sp.add_argument("--h-grid", required=True, metavar="LO:HI:STEPS")
    sp.add_argument("--h-spacing", choices=("geom", "lin"), default="geom")
    sp.add_argument("--exclude", type=float, default=EXCLUDE_RADIUS)
    sp.add_argument("--floor", type=float, default=SCAN_FLOOR)
    sp.add_argument("--workers", type=int, default=None,
                    help="processes (default: $POLYCC_THREADS or CPU count)")
    out(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("collapse", help="release a body system from rest and track its shape")
    sp.add_argument("file")
    sp.add_argument("--t-end", type=float, default=None)
    sp.add_argument("--dt", type=float, default=1e-3)
    out(sp)
    sp.set_defaults(func=cmd_collapse)

    sp = sub.add_parser("suite", help="randomized ring-sum property suite")
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    out(sp)
    sp.set_defaults(func=cmd_suite)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PolyccError, OSError) as exc:
        print(f"polycc {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
