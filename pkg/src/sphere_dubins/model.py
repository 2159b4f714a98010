"""Vehicle model on the unit sphere.

A configuration is a rotation whose columns are the position ``X``, the unit
tangent ``T`` and the normal ``N = X x T``. With geodesic curvature ``u`` the
frame obeys::

    X' = T,   T' = -X + u N,   N' = -u T

so ``R' = R @ skew((u, 0, 1))``. Holding ``u`` constant at ``-U_max``, ``+U_max``
or ``0`` traces a left small circle (L), a right small circle (R) or a great
circle (G). Segments are parametrised by the angle they subtend at their
circle's center; arc length is ``r * angle`` for L/R and ``angle`` for G.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NotRotation
from .so3 import STRUCT_TOL, exp_skew, is_rotation, orthonormalize

TWO_PI = 2.0 * math.pi
DIRECTIONS = ("L", "R", "G")
ZERO_ANGLE = 1e-12


def canonical_angle(angle: float) -> float:
    """Reduce an angle to [0, 2pi)."""
    a = math.fmod(float(angle), TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:
        a = 0.0
    return a


def _is_zero_angle(angle: float) -> bool:
    return angle < ZERO_ANGLE or TWO_PI - angle < ZERO_ANGLE


@dataclass(frozen=True)
class TurnRadius:
    """Radius ``r`` of the tightest small circle, ``r = 1/sqrt(1 + U_max**2)``."""

    r: float

    def __post_init__(self):
        if not (0.0 < self.r < 1.0):
            raise ValueError(f"turn radius must lie in (0, 1), got {self.r!r}")

    @property
    def u_max(self) -> float:
        return math.sqrt(1.0 - self.r * self.r) / self.r

    @property
    def kx(self) -> float:
        return math.sqrt(1.0 - self.r * self.r)

    @property
    def kz(self) -> float:
        return self.r

    @classmethod
    def from_u_max(cls, u_max: float) -> "TurnRadius":
        return cls(1.0 / math.sqrt(1.0 + u_max * u_max))


def as_radius(radius) -> TurnRadius:
    return radius if isinstance(radius, TurnRadius) else TurnRadius(float(radius))


@dataclass(frozen=True)
class Segment:
    direction: str
    angle: float

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"segment direction must be one of L, R, G; got {self.direction!r}")
        object.__setattr__(self, "angle", canonical_angle(self.angle))


@dataclass(frozen=True)
class PathSpec:
    """Ordered concatenation of segments traversed with turn radius ``radius``."""

    radius: TurnRadius
    segments: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "radius", as_radius(self.radius))
        segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in self.segments)
        object.__setattr__(self, "segments", segs)
        for a, b in zip(segs, segs[1:]):
            if a.direction == "G" and b.direction == "G":
                raise ValueError("two consecutive great-circle segments")

    @property
    def word(self) -> str:
        return "".join(s.direction for s in self.segments)

    @property
    def angles(self) -> tuple:
        return tuple(s.angle for s in self.segments)

    @classmethod
    def from_word(cls, radius, word: str, angles: Sequence[float]) -> "PathSpec":
        if len(word) != len(angles):
            raise ValueError("word and angle list differ in length")
        return cls(radius, tuple(Segment(d, a) for d, a in zip(word, angles)))

    def normalized(self) -> "PathSpec":
        """Drop zero-angle segments and merge equal neighbours (mod 2pi)."""
        segs = [s for s in self.segments if not _is_zero_angle(s.angle)]
        changed = True
        while changed:
            changed = False
            out: list[Segment] = []
            for seg in segs:
                if out and out[-1].direction == seg.direction:
                    merged = Segment(seg.direction, out.pop().angle + seg.angle)
                    if not _is_zero_angle(merged.angle):
                        out.append(merged)
                    changed = True
                else:
                    out.append(seg)
            segs = out
        return PathSpec(self.radius, tuple(segs))

    def to_dict(self) -> dict:
        return {
            "r": self.radius.r,
            "segments": [{"dir": s.direction, "angle": s.angle} for s in self.segments],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PathSpec":
        return cls(
            TurnRadius(float(data["r"])),
            tuple(Segment(s["dir"], float(s["angle"])) for s in data["segments"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "PathSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class Config:
    """Vehicle configuration; ``rot`` has columns X, T, N."""

    rot: np.ndarray

    def __post_init__(self):
        rot = np.array(self.rot, dtype=float)
        if not is_rotation(rot, STRUCT_TOL):
            raise NotRotation("configuration matrix is not a proper rotation")
        rot.setflags(write=False)
        object.__setattr__(self, "rot", rot)

    @property
    def X(self) -> np.ndarray:
        return self.rot[:, 0]

    @property
    def T(self) -> np.ndarray:
        return self.rot[:, 1]

    @property
    def N(self) -> np.ndarray:
        return self.rot[:, 2]

    @classmethod
    def identity(cls) -> "Config":
        return cls(np.eye(3))


def segment_generator(direction: str, radius) -> tuple[np.ndarray, float]:
    """Unit rotation axis and arc-length-per-angle scale of a segment type.

    Traversing angle ``phi`` right-multiplies the configuration by
    ``exp_skew(axis, phi)`` and covers arc length ``scale * phi``.
    """
    if direction == "G":
        return np.array([0.0, 0.0, 1.0]), 1.0
    rad = as_radius(radius)
    if direction == "R":
        return np.array([rad.kx, 0.0, rad.kz]), rad.r
    if direction == "L":
        return np.array([-rad.kx, 0.0, rad.kz]), rad.r
    raise ValueError(f"unknown direction {direction!r}")


def curvature(direction: str, radius) -> float:
    """Geodesic curvature ``u_g`` held along a segment of this type."""
    if direction == "G":
        return 0.0
    u = as_radius(radius).u_max
    return u if direction == "R" else -u


def segment_rotation(direction: str, angle: float, radius) -> np.ndarray:
    axis, _ = segment_generator(direction, radius)
    return exp_skew(axis, angle)


def propagate(c: Config, seg: Segment, radius) -> Config:
    return Config(c.rot @ segment_rotation(seg.direction, seg.angle, radius))


def path_endpoint(p: PathSpec, start: Config | None = None) -> Config:
    rot = np.eye(3) if start is None else start.rot
    for seg in p.segments:
        rot = rot @ segment_rotation(seg.direction, seg.angle, p.radius)
    return Config(rot)


def word_endpoint(word: str, angles: Iterable[float], radius) -> np.ndarray:
    """Endpoint rotation from the identity; angles are not canonicalised."""
    rot = np.eye(3)
    for d, a in zip(word, angles):
        rot = rot @ segment_rotation(d, a, radius)
    return rot


def path_length(p: PathSpec) -> float:
    return float(sum(segment_generator(s.direction, p.radius)[1] * s.angle for s in p.segments))


def word_length(word: str, angles: Iterable[float], radius) -> float:
    r = as_radius(radius).r
    return float(sum((1.0 if d == "G" else r) * a for d, a in zip(word, angles)))


def _frame_rhs(rot: np.ndarray, u_g: float) -> np.ndarray:
    x, t, n = rot[:, 0], rot[:, 1], rot[:, 2]
    return np.column_stack([t, -x + u_g * n, -u_g * t])


def ode_oracle_propagate(c: Config, u_g: float, arclen: float, step: float = 1e-3) -> Config:
    """Classical RK4 integration of the frame equations over ``arclen``.

    The step is shrunk so that an integer number of steps covers ``arclen``
    exactly; columns are re-orthonormalised once at the end.
    """
    if step > 1e-3:
        raise ValueError("oracle step must not exceed 1e-3")
    n = max(1, math.ceil(abs(arclen) / step))
    h = arclen / n
    y = np.array(c.rot, dtype=float)
    for _ in range(n):
        k1 = _frame_rhs(y, u_g)
        k2 = _frame_rhs(y + 0.5 * h * k1, u_g)
        k3 = _frame_rhs(y + 0.5 * h * k2, u_g)
        k4 = _frame_rhs(y + h * k3, u_g)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return Config(orthonormalize(y))


def sample_path(p: PathSpec, start: Config | None = None, ds: float = 0.01) -> list[tuple[float, np.ndarray]]:
    """Positions at arc-length steps ``ds`` plus every segment boundary."""
    if ds <= 0.0:
        raise ValueError("ds must be positive")
    rot = np.eye(3) if start is None else np.array(start.rot)
    samples = [(0.0, rot[:, 0].copy())]
    s0 = 0.0
    for seg in p.segments:
        axis, scale = segment_generator(seg.direction, p.radius)
        seg_len = scale * seg.angle
        k = math.floor(s0 / ds) + 1
        while k * ds < s0 + seg_len - 1e-12:
            local = (k * ds - s0) / scale
            samples.append((k * ds, (rot @ exp_skew(axis, local))[:, 0]))
            k += 1
        rot = rot @ exp_skew(axis, seg.angle)
        s0 += seg_len
        if seg_len > 0.0:
            samples.append((s0, rot[:, 0].copy()))
    return samples


def write_samples_csv(samples, destination) -> None:
    """Write ``(s, X)`` samples with header ``s,x,y,z``."""
    with open(destination, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["s", "x", "y", "z"])
        for s, x in samples:
            w.writerow([f"{s:.12g}"] + [f"{v:.12g}" for v in x])
