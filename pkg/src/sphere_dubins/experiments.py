"""Batch experiments: the perturbed-LRL classification sweep and existence thresholds."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NoPathFound
from .model import word_endpoint
from .planner import plan
from .solver import SolveOptions, solve_family

CSV_HEADER = ("r", "phi_deg", "best_family", "best_length", "second_family", "second_length")
REVERSAL = np.diag([1.0, -1.0, -1.0])
CLASSES = {
    "CGC": ("LGL", "LGR", "RGL", "RGR"),
    "CCC": ("LRL", "RLR"),
}
CLASSES["three"] = CLASSES["CGC"] + CLASSES["CCC"]


def _grid(start, end, step):
    n = int(math.floor((end - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(n)]


@dataclass(frozen=True)
class SweepConfig:
    alpha_deg: float = 1.0
    phi_start_deg: float = 2.0
    phi_end_deg: float = 178.0
    phi_step_deg: float = 2.0
    r_start: float = 0.01
    r_end: float = 0.99
    r_step: float = 0.01

    def __post_init__(self):
        if self.phi_step_deg <= 0 or self.r_step <= 0:
            raise ValueError("sweep steps must be positive")
        if self.phi_end_deg < self.phi_start_deg or self.r_end < self.r_start:
            raise ValueError("sweep ranges must be non-empty")

    def r_values(self) -> list:
        return _grid(self.r_start, self.r_end, self.r_step)

    def phi_values_deg(self) -> list:
        return _grid(self.phi_start_deg, self.phi_end_deg, self.phi_step_deg)


@dataclass(frozen=True)
class SweepRow:
    r: float
    phi_deg: float
    best_family: str
    best_length: float | None
    second_family: str | None = None
    second_length: float | None = None


def perturbed_lrl_goal(r: float, phi: float, alpha: float) -> np.ndarray:
    """Endpoint of ``L_alpha R_{pi+phi} L_{pi+phi}`` from the identity."""
    return word_endpoint("LRL", (alpha, math.pi + phi, math.pi + phi), r)


def sweep_point(r: float, phi_deg: float, alpha_deg: float = 1.0, opts: SolveOptions | None = None) -> SweepRow:
    goal = perturbed_lrl_goal(r, math.radians(phi_deg), math.radians(alpha_deg))
    try:
        res = plan(goal, r, opts)
    except NoPathFound:
        return SweepRow(r, phi_deg, "NONE", None)
    if res.best is None:
        return SweepRow(r, phi_deg, "NONE", None)
    best = res.best
    second = next((c for c in res.candidates if c.admissible and c.family != best.family), None)
    if second is None:
        return SweepRow(r, phi_deg, best.family, best.length)
    return SweepRow(r, phi_deg, best.family, best.length, second.family, second.length)


def _sweep_r(args):
    r, phis, alpha_deg, opts = args
    return [sweep_point(r, p, alpha_deg, opts) for p in phis]


def run_sweep(cfg: SweepConfig = SweepConfig(), opts: SolveOptions | None = None, workers: int = 1) -> list:
    """One row per ``(r, phi)`` grid point, in ``(r, phi)`` order.

    ``workers > 1`` spreads the ``r`` values over processes; the output is
    the same either way.
    """
    phis = cfg.phi_values_deg()
    jobs = [(r, phis, cfg.alpha_deg, opts) for r in cfg.r_values()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_r, jobs))
    else:
        chunks = [_sweep_r(j) for j in jobs]
    return [row for chunk in chunks for row in chunk]


def family_exists(goal, r: float, words, opts: SolveOptions | None = None):
    """Shortest length over solutions whose reported word is in ``words``, or None."""
    best = None
    for w in words:
        for c in solve_family(w, goal, r, opts):
            if c.family in words and (best is None or c.length < best):
                best = c.length
    return best


def existence_study(r_grid, goal=REVERSAL, opts: SolveOptions | None = None) -> list:
    """Rows ``(r, class, exists, min_length)`` for the pooled CGC and CCC classes."""
    out = []
    for r in r_grid:
        for name in ("CGC", "CCC"):
            length = family_exists(goal, r, CLASSES[name], opts)
            out.append((float(r), name, length is not None, length))
    return out


def existence_boundary(cls: str, lo: float, hi: float, goal=REVERSAL, tol: float = 1e-4,
                       opts: SolveOptions | None = None) -> float:
    """Bisect the largest ``r`` in ``[lo, hi]`` at which class ``cls`` still has a solution.

    Requires existence at ``lo`` and non-existence at ``hi``.
    """
    words = CLASSES[cls]
    if family_exists(goal, lo, words, opts) is None:
        raise ValueError(f"{cls} has no solution at the lower bracket r = {lo}")
    if family_exists(goal, hi, words, opts) is not None:
        raise ValueError(f"{cls} still has a solution at the upper bracket r = {hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if family_exists(goal, mid, words, opts) is None:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return "%.12g" % x


def emit_csv(rows, destination) -> None:
    """Write sweep rows as CSV to a path or an open text file."""
    if hasattr(destination, "write"):
        _write_rows(rows, destination)
        return
    try:
        with open(destination, "w", newline="") as fh:
            _write_rows(rows, fh)
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {destination}: {exc.strerror or exc}") from exc


def _write_rows(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(
            [_fmt(row.r), _fmt(row.phi_deg), row.best_family, _fmt(row.best_length),
             row.second_family or "", _fmt(row.second_length)]
        )


def read_csv(source) -> list:
    """Parse a file written by :func:`emit_csv`."""

    def num(s):
        return float(s) if s else None

    if hasattr(source, "read"):
        return _parse(source, num)
    with open(source, newline="") as fh:
        return _parse(fh, num)


def _parse(fh, num):
    reader = csv.reader(fh)
    header = next(reader, None)
    if tuple(header or ()) != CSV_HEADER:
        raise ValueError("not a sweep CSV: unexpected header")
    return [
        SweepRow(float(r), float(p), bf, num(bl), sf or None, num(sl))
        for r, p, bf, bl, sf, sl in reader
    ]
