"""Command-line interface.

Exit codes: 0 on success, 2 when no path reaches the goal, 1 on bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import analysis, experiments
from .errors import NoPathFound, SphereDubinsError
from .model import PathSpec, sample_path, write_samples_csv
from .planner import classify, plan
from .pmp import pmp_certificate
from .so3 import exp_skew
from .solver import SolveOptions

EXIT_OK, EXIT_ARGS, EXIT_NO_PATH = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _floats(text):
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers, got {text!r}")


class _Numbers(argparse.Action):
    """Numbers given as separate tokens and/or comma-separated lists."""

    def __init__(self, option_strings, dest, **kw):
        super().__init__(option_strings, dest, nargs="+", type=_floats, **kw)

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, [v for chunk in values for v in chunk])


def _common(suppress: bool) -> argparse.ArgumentParser:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("solver and output")
    g.add_argument("--accept-tol", type=float, default=d(1e-9), help="residual acceptance (rad)")
    g.add_argument("--grid-pts", type=int, default=d(None), help="grid starts per dimension (grid solver)")
    g.add_argument("--min-angle", type=float, default=d(1e-7), help="arcs shorter than this are dropped")
    g.add_argument("--solver", choices=("analytic", "grid"), default=d("analytic"))
    g.add_argument("--backend", choices=("auto", "compiled", "python"), default=d("auto"))
    g.add_argument("--out", default=d(None), help="output file (default: stdout)")
    g.add_argument("--format", choices=("csv", "json"), default=d(None))
    return p


def _goal_args(p):
    p.add_argument("--r", type=float, required=True, help="small-circle radius in (0, 1)")
    p.add_argument("--goal", action=_Numbers, help="9 floats, row-major rotation matrix")
    p.add_argument("--goal-axis", action=_Numbers, help="x,y,z rotation axis")
    p.add_argument("--goal-angle", type=float, help="rotation angle (rad) about --goal-axis")


def _path_args(p):
    p.add_argument("--path-json", help="file with {r, segments: [{dir, angle}]}")
    p.add_argument("--r", type=float, help="small-circle radius")
    p.add_argument("--word", help="direction word, e.g. LRL")
    p.add_argument("--angles", action=_Numbers, help="segment angles (rad)")


def _phi_args(p):
    p.add_argument("--r", type=float, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--phi", type=float, help="angle phi in radians")
    g.add_argument("--phi-deg", type=float, help="angle phi in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sphere-dubins", description=__doc__.splitlines()[0], parents=[_common(False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_common(True)]

    p = sub.add_parser("plan", parents=common, help="shortest path to a goal rotation")
    _goal_args(p)
    p.add_argument("--emit-path", help="also write sampled positions of the best path as CSV")
    p.add_argument("--ds", type=float, default=0.01, help="arc-length sampling step for --emit-path")

    p = sub.add_parser("classify", parents=common, help="family word of the shortest path")
    _goal_args(p)

    p = sub.add_parser("sweep", parents=common, help="perturbed-LRL classification sweep")
    p.add_argument("--alpha-deg", type=float, default=1.0)
    p.add_argument("--phi-start", type=float, default=2.0, help="degrees")
    p.add_argument("--phi-end", type=float, default=178.0, help="degrees")
    p.add_argument("--phi-step", type=float, default=2.0, help="degrees")
    p.add_argument("--r-start", type=float, default=0.01)
    p.add_argument("--r-end", type=float, default=0.99)
    p.add_argument("--r-step", type=float, default=0.01)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("existence", parents=common, help="three-segment existence on the reversal goal")
    p.add_argument("--r-grid", action=_Numbers, help="radii to test (default 0.05..0.95 step 0.05)")
    p.add_argument("--bisect", action="store_true", help="also locate the CGC and three-segment boundaries")

    p = sub.add_parser("identities", parents=common, help="closed forms vs matrix products")
    _phi_args(p)

    p = sub.add_parser("perturb", parents=common, help="fitted vs closed perturbation coefficients")
    _phi_args(p)
    p.add_argument("--alphas", action=_Numbers, help="alpha values for the fit")

    p = sub.add_parser("certify", parents=common, help="costate certificate of a path")
    _path_args(p)

    p = sub.add_parser("sample", parents=common, help="sampled positions along a path")
    _path_args(p)
    p.add_argument("--ds", type=float, default=0.01)
    return parser


def _opts(ns) -> SolveOptions:
    return SolveOptions(method=ns.solver, grid_pts=ns.grid_pts, accept_tol=ns.accept_tol,
                        min_angle=ns.min_angle, backend=ns.backend)


def _goal(ns, parser):
    if ns.goal is not None:
        if ns.goal_axis is not None:
            parser.error("give either --goal or --goal-axis/--goal-angle, not both")
        if len(ns.goal) != 9:
            parser.error("--goal takes 9 numbers")
        return np.array(ns.goal).reshape(3, 3)
    if ns.goal_axis is None or ns.goal_angle is None:
        parser.error("a goal is required: --goal or --goal-axis with --goal-angle")
    axis = np.array(ns.goal_axis)
    if axis.shape != (3,) or not np.linalg.norm(axis) > 0:
        parser.error("--goal-axis takes three numbers, not all zero")
    return exp_skew(axis / np.linalg.norm(axis), ns.goal_angle)


def _path(ns, parser) -> PathSpec:
    if ns.path_json:
        with open(ns.path_json) as fh:
            return PathSpec.from_json(fh.read())
    if ns.r is None or ns.word is None or ns.angles is None:
        parser.error("give --path-json or all of --r, --word, --angles")
    return PathSpec.from_word(ns.r, ns.word, ns.angles)


def _phi(ns):
    return ns.phi if ns.phi is not None else math.radians(ns.phi_deg)


def _table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["%.12g" % v if isinstance(v, float) else ("" if v is None else v) for v in row])
    return buf.getvalue()


def _emit(ns, text: str) -> None:
    if ns.out:
        with open(ns.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(ns, parser) -> int:
    cmd = ns.command
    if cmd == "plan":
        res = plan(_goal(ns, parser), ns.r, _opts(ns))
        if ns.emit_path and res.best is not None:
            write_samples_csv(sample_path(res.best.path(ns.r), ds=ns.ds), ns.emit_path)
        _emit(ns, res.to_json(indent=2) + "\n")
    elif cmd == "classify":
        _emit(ns, classify(_goal(ns, parser), ns.r, _opts(ns)) + "\n")
    elif cmd == "sweep":
        cfg = experiments.SweepConfig(ns.alpha_deg, ns.phi_start, ns.phi_end, ns.phi_step,
                                      ns.r_start, ns.r_end, ns.r_step)
        rows = experiments.run_sweep(cfg, _opts(ns), workers=ns.workers)
        if ns.format == "json":
            _emit(ns, json.dumps([r.__dict__ for r in rows], indent=1) + "\n")
        elif ns.out:
            experiments.emit_csv(rows, ns.out)
        else:
            experiments.emit_csv(rows, sys.stdout)
    elif cmd == "existence":
        grid = ns.r_grid or [round(0.05 * k, 10) for k in range(1, 20)]
        rows = experiments.existence_study(grid, opts=_opts(ns))
        bounds = {}
        if ns.bisect:
            bounds = {
                "CGC": experiments.existence_boundary("CGC", 0.5, 0.8, opts=_opts(ns)),
                "three": experiments.existence_boundary("three", 0.8, 0.95, opts=_opts(ns)),
            }
        if ns.format == "json":
            data = {"rows": [dict(zip(("r", "class", "exists", "min_length"), row)) for row in rows]}
            data["boundaries"] = bounds
            _emit(ns, json.dumps(data, indent=2) + "\n")
        else:
            text = _table(("r", "class", "exists", "min_length"), rows)
            for name, value in bounds.items():
                text += f"# boundary {name} {value:.6f}\n"
            _emit(ns, text)
    elif cmd == "identities":
        rows = [(n, a, b, abs(a - b)) for n, a, b in analysis.identity_suite(ns.r, _phi(ns))]
        if ns.format == "json":
            keys = ("name", "closed", "numeric", "abs_diff")
            _emit(ns, json.dumps([dict(zip(keys, map(_plain, row))) for row in rows], indent=2) + "\n")
        else:
            _emit(ns, _table(("name", "closed", "numeric", "abs_diff"), [tuple(map(_plain, r)) for r in rows]))
    elif cmd == "perturb":
        phi = _phi(ns)
        kw = {"alphas": ns.alphas} if ns.alphas else {}
        data = {"r": ns.r, "phi": phi, "fitted": analysis.perturbation_numeric(ns.r, phi, **kw).to_dict()}
        if ns.r <= 0.5:
            data["closed"] = analysis.perturbation_closed(ns.r, phi).to_dict()
        _emit(ns, json.dumps(data, indent=2) + "\n")
    elif cmd == "certify":
        _emit(ns, json.dumps(pmp_certificate(_path(ns, parser)).to_dict(), indent=2) + "\n")
    elif cmd == "sample":
        samples = sample_path(_path(ns, parser), ds=ns.ds)
        if ns.out:
            write_samples_csv(samples, ns.out)
        else:
            sys.stdout.write(_table(("s", "x", "y", "z"), [(s, *map(float, x)) for s, x in samples]))
    return EXIT_OK


def _plain(v):
    return float(v) if isinstance(v, (float, np.floating)) else v


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return _run(ns, parser)
    except NoPathFound as exc:
        print(f"sphere-dubins: no path: {exc}", file=sys.stderr)
        return EXIT_NO_PATH
    except (SphereDubinsError, ValueError, OSError) as exc:
        print(f"sphere-dubins: error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
