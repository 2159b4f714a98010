"""Boundary-value solver: segment angles that carry the identity to a goal.

Each candidate family is a direction word such as ``"LRL"`` or ``"RGL"``.
Two root finders are available:

``analytic``
    Reduces the family to one scalar equation in the middle angle (the
    outer axes are fixed by their own rotations), enumerates every root,
    recovers the outer angles in closed form and polishes with Newton.
``grid``
    Damped Newton from a uniform grid of starts over ``(0, 2pi)^k``.

Both return every accepted root, deduplicated and sorted by length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from itertools import product

import numpy as np
from scipy.optimize import brentq

from .kernels import get_newton
from .model import PathSpec, as_radius, segment_generator, word_endpoint, word_length
from .so3 import exp_skew, rotation_angle_between

TWO_PI = 2.0 * math.pi

SHORT_FAMILIES = ("L", "R", "G", "LR", "RL", "LG", "GL", "RG", "GR", "LGL", "LGR", "RGL", "RGR", "LRL", "RLR")
CCCC_FAMILIES = ("LRLR", "RLRL")
FAMILIES = SHORT_FAMILIES + CCCC_FAMILIES


@dataclass(frozen=True)
class SolveOptions:
    method: str = "analytic"
    grid_pts: int | None = None
    accept_tol: float = 1e-9
    min_angle: float = 1e-7
    max_iter: int = 60
    fd_step: float = 1e-7
    backend: str = "auto"

    def grid_for(self, k: int) -> int:
        if self.grid_pts is not None:
            return self.grid_pts
        return 16 if k >= 3 else 64


@dataclass(frozen=True)
class CandidateSolution:
    """A solved path: ``angles`` holds one angle per segment of ``family``."""

    family: str
    angles: tuple
    residual: float
    length: float
    admissible: bool = True

    def path(self, radius) -> PathSpec:
        return PathSpec.from_word(radius, self.family, self.angles)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "angles": list(self.angles),
            "residual": self.residual,
            "length": self.length,
            "admissible": self.admissible,
        }


def check_family(word: str) -> None:
    if not word or any(d not in "LRG" for d in word):
        raise ValueError(f"bad family word {word!r}")
    if "GG" in word:
        raise ValueError("family word contains GG")
    if len(word) == 4 and word not in CCCC_FAMILIES:
        raise ValueError("only LRLR and RLRL are supported four-segment families")
    if len(word) > 4:
        raise ValueError("families have at most four segments")


def enumerate_families(radius) -> list:
    """Candidate words: the three-segment-or-fewer set, plus CCCC for r > 1/2."""
    r = as_radius(radius).r
    return list(SHORT_FAMILIES) + (list(CCCC_FAMILIES) if r > 0.5 else [])


def free_index(word: str) -> tuple:
    """Free-angle index of each segment; CCCC middles share one angle."""
    if len(word) == 4:
        return (0, 1, 1, 2)
    return tuple(range(len(word)))


def expand_angles(word: str, free) -> tuple:
    return tuple(float(free[i]) for i in free_index(word))


def residual(family: str, angles, goal, radius) -> float:
    """Rotation angle between the family endpoint and ``goal``.

    ``angles`` are the free angles: one per segment, except the CCCC
    families which take ``(phi1, psi, phi4)`` with both middle arcs ``psi``.
    """
    check_family(family)
    seg_angles = expand_angles(family, angles)
    return rotation_angle_between(word_endpoint(family, seg_angles, radius), goal)


# --- analytic root enumeration -------------------------------------------------


def _angle_about(axis, v, w, eps=1e-9):
    """Angle t with ``exp_skew(axis, t) @ v`` parallel to ``w`` in the plane normal to ``axis``."""
    vp = v - axis * (axis @ v)
    wp = w - axis * (axis @ w)
    if np.linalg.norm(vp) < eps or np.linalg.norm(wp) < eps:
        return 0.0
    return math.atan2(axis @ np.cross(vp, wp), vp @ wp)


def _analytic_roots(word, goal, rad):
    axes = [segment_generator(d, rad)[0] for d in word]
    n = len(word)
    if n == 1:
        (a,) = axes
        probe = np.cross(a, np.eye(3)[int(np.argmin(np.abs(a)))])
        return [(_angle_about(a, probe, goal @ probe),)]
    if n == 2:
        a1, a2 = axes
        return [(_angle_about(a1, a2, goal @ a2), _angle_about(a2, goal.T @ a1, a1))]
    if n == 3:
        a1, a2, a3 = axes
        # a1.T goal a3 = a1.T exp(a2 t) a3 = p cos t + q sin t + s
        s = (a1 @ a2) * (a2 @ a3)
        p = a1 @ a3 - s
        q = a1 @ np.cross(a2, a3)
        target = a1 @ goal @ a3 - s
        amp = math.hypot(p, q)
        if abs(target) > amp * (1.0 + 1e-7):
            return []
        base = math.atan2(q, p)
        half = math.acos(max(-1.0, min(1.0, target / amp)))
        roots = []
        for mid in {base + half, base - half}:
            rot2 = exp_skew(a2, mid)
            roots.append(
                (_angle_about(a1, rot2 @ a3, goal @ a3), mid, _angle_about(a3, goal.T @ a1, rot2.T @ a1))
            )
        return roots
    return _cccc_roots(axes, goal)


def _cccc_roots(axes, goal, samples=721):
    a1, a2, a3, a4 = axes
    w2, w3 = _skew(a2), _skew(a3)
    target = a1 @ goal @ a4
    psi = np.linspace(math.pi, TWO_PI, samples)

    def middle(t):
        r2 = np.eye(3) + math.sin(t) * w2 + (1.0 - math.cos(t)) * (w2 @ w2)
        r3 = np.eye(3) + math.sin(t) * w3 + (1.0 - math.cos(t)) * (w3 @ w3)
        return r2 @ r3

    def f(t):
        return a1 @ middle(t) @ a4 - target

    vals = np.array([f(t) for t in psi])
    found = []
    for i in range(samples - 1):
        if vals[i] == 0.0:
            found.append(psi[i])
        elif vals[i] * vals[i + 1] < 0.0:
            found.append(brentq(f, psi[i], psi[i + 1], xtol=1e-15))
    # tangential roots: local minima of |f| that touch zero
    mag = np.abs(vals)
    for i in range(1, samples - 1):
        if mag[i] <= mag[i - 1] and mag[i] <= mag[i + 1] and vals[i - 1] * vals[i + 1] > 0.0 and mag[i] < 1e-4:
            found.append(psi[i])
    roots = []
    for t in found:
        m = middle(t)
        roots.append((_angle_about(a1, m @ a4, goal @ a4), t, _angle_about(a4, goal.T @ a1, m.T @ a1)))
    return roots


def _skew(a):
    return np.array([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])


# --- shared post-processing ------------------------------------------------------


def _newton(word, goal, rad, starts, opts, stop_tol):
    axes = np.array([segment_generator(d, rad)[0] for d in word])
    fn = get_newton(opts.backend)
    return fn(axes, np.array(free_index(word)), goal, np.asarray(starts, dtype=float),
              opts.max_iter, opts.fd_step, stop_tol)


def _is_zero(angle, tol):
    return angle < tol or TWO_PI - angle < tol


def _reduce(word, seg_angles, tol):
    """Drop zero arcs and merge equal neighbours."""
    out_w, out_a = [], []
    for d, a in zip(word, seg_angles):
        if _is_zero(a, tol):
            continue
        if out_w and out_w[-1] == d:
            out_a[-1] = (out_a[-1] + a) % TWO_PI
            if _is_zero(out_a[-1], tol):
                out_w.pop()
                out_a.pop()
            continue
        out_w.append(d)
        out_a.append(a)
    return "".join(out_w), tuple(out_a)


def _finish(word, free_roots, goal, rad, opts):
    """Canonicalise, re-dispatch degenerate roots, deduplicate, sort."""
    found = []
    for free in free_roots:
        free = tuple(float(a) % TWO_PI for a in free)
        seg = expand_angles(word, free)
        if len(word) == 4 and not (math.pi - opts.min_angle < free[1] < TWO_PI):
            continue
        fam, seg = word, seg
        if any(_is_zero(a, opts.min_angle) for a in seg):
            fam, seg = _reduce(word, seg, opts.min_angle)
        if not fam:
            continue
        res = rotation_angle_between(word_endpoint(fam, seg, rad), goal)
        if res >= opts.accept_tol:
            continue
        found.append(CandidateSolution(fam, seg, res, word_length(fam, seg, rad)))
    return sort_candidates(dedupe(found))


def dedupe(cands, tol=1e-6):
    out = []
    for c in cands:
        dup = False
        for i, o in enumerate(out):
            if o.family == c.family and all(
                min(abs(x - y), TWO_PI - abs(x - y)) < tol for x, y in zip(o.angles, c.angles)
            ):
                dup = True
                if c.residual < o.residual:
                    out[i] = c
                break
        if not dup:
            out.append(c)
    return out


def sort_candidates(cands):
    return sorted(cands, key=lambda c: (c.length, c.angles))


def solve_family(family: str, goal, radius, opts: SolveOptions | None = None) -> list:
    """All accepted solutions of one family, sorted by length.

    An empty list means the family has no path to ``goal``; this is a
    legitimate outcome. Roots with an arc shorter than ``opts.min_angle``
    are reported under the reduced family word.
    """
    opts = opts or SolveOptions()
    check_family(family)
    rad = as_radius(radius)
    goal = np.asarray(goal, dtype=float)
    k = len(set(free_index(family)))
    stop_tol = opts.accept_tol * 1e-3
    if opts.method == "analytic":
        roots = _analytic_roots(family, goal, rad)
        if not roots:
            return []
        theta, res = _newton(family, goal, rad, [_free_of(family, r) for r in roots], opts, stop_tol)
        free_roots = list(theta)
    elif opts.method == "grid":
        n = opts.grid_for(k)
        ticks = (np.arange(n) + 0.5) * (TWO_PI / n)
        starts = np.array(list(product(ticks, repeat=k)))
        theta, res = _newton(family, goal, rad, starts, opts, stop_tol)
        ok = res < opts.accept_tol
        free_roots = _cluster(theta[ok], res[ok])
    else:
        raise ValueError(f"unknown solver method {opts.method!r}")
    return _finish(family, free_roots, goal, rad, opts)


def _cluster(theta, res, tol=1e-6):
    """One representative (lowest residual) per group of roots equal mod 2pi."""
    theta = np.mod(theta, TWO_PI)
    order = np.argsort(res, kind="stable")
    theta = theta[order]
    remaining = np.ones(len(theta), dtype=bool)
    reps = []
    while np.any(remaining):
        i = int(np.argmax(remaining))
        d = np.abs(theta - theta[i])
        d = np.minimum(d, TWO_PI - d)
        remaining &= ~np.all(d < tol, axis=1)
        reps.append(theta[i])
    return reps


def _free_of(word, seg_angles):
    if len(word) == 4:
        return (seg_angles[0], seg_angles[1], seg_angles[-1])
    return tuple(seg_angles)


def solve_all(goal, radius, opts: SolveOptions | None = None, families=None) -> list:
    """Union of :func:`solve_family` over ``families`` (default: all for ``radius``)."""
    fams = enumerate_families(radius) if families is None else families
    out = []
    for fam in fams:
        out.extend(solve_family(fam, goal, radius, opts))
    return sort_candidates(dedupe(out))


def with_admissible(c: CandidateSolution, ok: bool) -> CandidateSolution:
    return replace(c, admissible=ok)
