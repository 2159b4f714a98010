"""Pontryagin necessary conditions for shortest curvature-bounded paths.

The costate enters only through the scalars ``(A, B, C)`` whose dynamics are
``A' = B``, ``B' = -A + u C``, ``C' = -u B`` with Hamiltonian ``H = 1 + C + u A``.
Along an extremal ``H == 0``; the control is ``-U_max`` where ``A > 0``,
``+U_max`` where ``A < 0`` and ``0`` only on intervals where ``A`` vanishes.
At every switch ``A = 0`` and ``C = -1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .model import PathSpec, as_radius, curvature

SIGN_TOL = 1e-8
SWITCH_TOL = 1e-8
ANGLE_TOL = 1e-6
SAMPLES_PER_SEGMENT = 100


@dataclass(frozen=True)
class AdjointState:
    A: float
    B: float
    C: float

    def as_array(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C])

    def norm(self) -> float:
        return math.sqrt(self.A * self.A + self.B * self.B + self.C * self.C)


@dataclass
class CertificateReport:
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, rule: str, s: float, magnitude: float) -> None:
        self.violations.append({"rule": rule, "s": float(s), "magnitude": float(magnitude)})

    def rules(self) -> set:
        return {v["rule"] for v in self.violations}

    def to_dict(self) -> dict:
        return {"pass": self.passed, "violations": list(self.violations)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def adjoint_matrix(direction: str, angle: float, radius) -> np.ndarray:
    """Flow of the costate equations across ``angle`` of a segment.

    For a small circle with signed curvature ``U`` this is
    ``I + W sin(phi) + W^2 (1 - cos(phi))`` with ``W = r * [[0, 1, 0],
    [-1, 0, U], [0, -U, 0]]``; a great circle uses ``r = 1, U = 0``.
    """
    if direction == "G":
        r, ru = 1.0, 0.0
    else:
        rad = as_radius(radius)
        r = rad.r
        ru = rad.kx if direction == "R" else -rad.kx
    s, c = math.sin(angle), math.cos(angle)
    v = 1.0 - c
    return np.array(
        [
            [1.0 - r * r * v, r * s, r * ru * v],
            [-r * s, c, ru * s],
            [r * ru * v, -ru * s, 1.0 - ru * ru * v],
        ]
    )


def adjoint_propagate(psi0: AdjointState, direction: str, angle: float, radius) -> AdjointState:
    return AdjointState(*(adjoint_matrix(direction, angle, radius) @ psi0.as_array()))


def hamiltonian(psi: AdjointState, u_g: float) -> float:
    return 1.0 + psi.C + u_g * psi.A


def _is_c(d: str) -> bool:
    return d in ("L", "R")


def structural_violations(p: PathSpec, angle_tol: float = ANGLE_TOL) -> CertificateReport:
    """Pattern rules that exclude a path from optimality.

    A CCC middle arc must exceed pi; the two middle arcs of a CCCC path must
    be equal and exceed pi; GCG, GCC and CCG never occur; for ``r <= 1/2`` no
    path has more than three segments. An arc within ``angle_tol`` of pi is
    accepted as the boundary case.
    """
    report = CertificateReport()
    segs = p.segments
    word = p.word
    starts = _segment_starts(p)
    lo = math.pi - angle_tol
    for i in range(len(segs) - 2):
        pattern = "".join("G" if d == "G" else "C" for d in word[i : i + 3])
        if pattern in ("GCG", "GCC", "CCG"):
            report.add(pattern, starts[i], 1.0)
        if pattern == "CCC" and not (lo < segs[i + 1].angle < 2.0 * math.pi):
            report.add("CCC_middle", starts[i + 1], math.pi - segs[i + 1].angle)
    for i in range(len(segs) - 3):
        if all(_is_c(d) for d in word[i : i + 4]):
            a2, a3 = segs[i + 1].angle, segs[i + 2].angle
            if abs(a2 - a3) > 1e-9:
                report.add("CCCC_equal", starts[i + 1], abs(a2 - a3))
            for k, a in ((i + 1, a2), (i + 2, a3)):
                if not lo < a:
                    report.add("CCCC_middle", starts[k], math.pi - a)
    if p.radius.r <= 0.5 and len(segs) > 3:
        report.add("segment_count", 0.0, len(segs) - 3)
    return report


def _segment_starts(p: PathSpec) -> list:
    out, s = [], 0.0
    for seg in p.segments:
        out.append(s)
        s += (1.0 if seg.direction == "G" else p.radius.r) * seg.angle
    return out


def anchor_b0(p: PathSpec) -> float | None:
    """Value of ``B`` at the first switch, or None if it is unbounded.

    Any great circle forces ``B = 0``; an interior small circle of angle phi
    between two switches needs ``B = r U tan(phi / 2)`` so that ``A`` returns
    to zero; with no interior arc the choice ``B = 0`` is admissible.
    """
    word = p.word
    if "G" in word or len(word) < 3:
        return 0.0
    seg = p.segments[1]
    half = 0.5 * seg.angle
    if abs(math.cos(half)) < 1e-12:
        return None
    ru = p.radius.kx if seg.direction == "R" else -p.radius.kx
    return ru * math.tan(half)


def pmp_certificate(
    p: PathSpec,
    samples: int = SAMPLES_PER_SEGMENT,
    tol: float = SIGN_TOL,
    angle_tol: float = ANGLE_TOL,
) -> CertificateReport:
    """Check the Pontryagin necessary conditions along ``p``.

    A passing report does not prove optimality. Paths with fewer than two
    segments have no switch and pass trivially.
    """
    p = p.normalized()
    report = structural_violations(p, angle_tol)
    segs = p.segments
    if len(segs) < 2:
        return report
    b0 = anchor_b0(p)
    starts = _segment_starts(p)
    if b0 is None:
        report.add("abnormal", starts[1], float("inf"))
        return report
    psi_switch = np.array([0.0, b0, -1.0])
    rad = p.radius

    # first segment is integrated backwards from the first switch
    _check_segment(report, segs[0], rad, psi_switch, starts[1], -1, samples, tol)
    psi = psi_switch
    for i in range(1, len(segs)):
        if i > 1:
            if abs(psi[0]) > tol or abs(psi[2] + 1.0) > tol:
                report.add("switch", starts[i], max(abs(psi[0]), abs(psi[2] + 1.0)))
        psi = _check_segment(report, segs[i], rad, psi, starts[i], 1, samples, tol)
    return report


def _check_segment(report, seg, rad, psi0, s0, sense, samples, tol):
    u = curvature(seg.direction, rad)
    scale = 1.0 if seg.direction == "G" else rad.r
    for j in range(1, samples + 1):
        phi = sense * seg.angle * j / samples
        psi = adjoint_matrix(seg.direction, phi, rad) @ psi0
        s = s0 + scale * phi
        h = 1.0 + psi[2] + u * psi[0]
        if abs(h) > tol:
            report.add("hamiltonian", s, abs(h))
        if seg.direction == "G":
            if abs(psi[0]) > tol:
                report.add("geodesic", s, abs(psi[0]))
        elif u * psi[0] > tol:
            report.add("sign", s, abs(psi[0]))
    return adjoint_matrix(seg.direction, sense * seg.angle, rad) @ psi0


def adjoint_trajectory(p: PathSpec, samples: int = SAMPLES_PER_SEGMENT):
    """Sampled ``(s, u_g, A, B, C)`` rows along the anchored costate of ``p``.

    Returns an empty list when the path has no switch or an unbounded anchor.
    """
    p = p.normalized()
    segs = p.segments
    b0 = anchor_b0(p) if len(segs) >= 2 else None
    if b0 is None:
        return []
    starts = _segment_starts(p)
    rad = p.radius
    psi_switch = np.array([0.0, b0, -1.0])
    psi_start = adjoint_matrix(segs[0].direction, -segs[0].angle, rad) @ psi_switch
    rows = []
    psi = psi_start
    for i, seg in enumerate(segs):
        u = curvature(seg.direction, rad)
        scale = 1.0 if seg.direction == "G" else rad.r
        for j in range(samples + 1):
            phi = seg.angle * j / samples
            a, b, c = adjoint_matrix(seg.direction, phi, rad) @ psi
            rows.append((starts[i] + scale * phi, u, a, b, c))
        psi = adjoint_matrix(seg.direction, seg.angle, rad) @ psi
    return rows
