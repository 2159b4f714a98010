"""Shortest-path planning: solve every candidate family and keep the shortest admissible one."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import NoPathFound
from .model import as_radius
from .pmp import pmp_certificate, structural_violations
from .so3 import as_rotation, rotation_angle_between
from .solver import CandidateSolution, SolveOptions, solve_all, with_admissible

IDENTITY_TOL = 1e-9
TIE_TOL = 1e-9

EMPTY = CandidateSolution("", (), 0.0, 0.0)


@dataclass
class PlanResult:
    best: CandidateSolution | None
    candidates: list = field(default_factory=list)
    certified: bool = False
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "best": None if self.best is None else self.best.to_dict(),
            "candidates": [c.to_dict() for c in self.candidates],
            "certified": self.certified,
            "warnings": list(self.warnings),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _pick(admissible: list) -> CandidateSolution:
    shortest = min(c.length for c in admissible)
    tied = [c for c in admissible if c.length <= shortest + TIE_TOL]
    return min(tied, key=lambda c: (len(c.family), c.family, c.length))


def plan(goal, radius, opts: SolveOptions | None = None) -> PlanResult:
    """Shortest path from the identity configuration to ``goal``.

    Candidates that break a structural optimality rule stay in
    ``candidates`` with ``admissible=False`` but never become ``best``.
    ``certified`` is set only for ``r <= 1/2``, where the candidate set is
    complete, and only if the best path passes the costate certificate.

    Raises:
        NoPathFound: no family reaches ``goal``.
    """
    goal = as_rotation(goal)
    rad = as_radius(radius)
    warnings = []
    if rad.r > 0.5:
        warnings.append(
            "r > 1/2: the six-type classification does not apply and four-segment "
            "paths are searched; optimality is not guaranteed"
        )
    if rotation_angle_between(np.eye(3), goal) < IDENTITY_TOL:
        return PlanResult(EMPTY, [EMPTY], rad.r <= 0.5, warnings)

    found = solve_all(goal, rad, opts)
    if not found:
        raise NoPathFound(f"no candidate family reaches the goal at r = {rad.r:g}")
    cands = [with_admissible(c, structural_violations(c.path(rad)).passed) for c in found]
    admissible = [c for c in cands if c.admissible]
    if not admissible:
        warnings.append("every candidate breaks a structural optimality rule; no best path")
        return PlanResult(None, cands, False, warnings)

    best = _pick(admissible)
    report = pmp_certificate(best.path(rad))
    if not report.passed:
        warnings.append("best path fails the costate certificate: " + ", ".join(sorted(report.rules())))
    return PlanResult(best, cands, rad.r <= 0.5 and report.passed, warnings)


def classify(goal, radius, opts: SolveOptions | None = None) -> str:
    """Family word of the best path to ``goal``; propagates :class:`NoPathFound`."""
    best = plan(goal, radius, opts).best
    if best is None:
        raise NoPathFound("no admissible candidate")
    return best.family
