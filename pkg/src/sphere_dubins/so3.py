"""Small exact linear algebra on 3-vectors and 3x3 matrices.

Vectors are ``(3,)`` float arrays, matrices ``(3, 3)`` float arrays. The skew
convention is fixed as ``skew(a) @ v == cross(a, v)`` everywhere.
"""

from __future__ import annotations

import numpy as np

from .errors import NotRotation, NotSkew, NotUnit

STRUCT_TOL = 1e-10

#: Returned by :func:`fixed_directions` for the identity rotation.
ALL_DIRECTIONS = "AllDirections"


def skew(axial) -> np.ndarray:
    """Cross-product matrix of ``axial``."""
    x, y, z = np.asarray(axial, dtype=float)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def axial(m, tol: float = STRUCT_TOL) -> np.ndarray:
    """Darboux (axial) vector of an antisymmetric matrix.

    Raises:
        NotSkew: if ``m + m.T`` has an entry larger than ``tol``.
    """
    m = np.asarray(m, dtype=float)
    if np.max(np.abs(m + m.T)) > tol:
        raise NotSkew("matrix is not antisymmetric")
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def vee(m) -> np.ndarray:
    """Axial vector of the antisymmetric part of ``m`` (no check)."""
    m = np.asarray(m, dtype=float)
    return 0.5 * np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])


def exp_skew(axis, angle: float, tol: float = STRUCT_TOL) -> np.ndarray:
    """Euler-Rodrigues exponential ``exp(skew(axis) * angle)`` for a unit axis."""
    axis = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(axis) - 1.0) > tol:
        raise NotUnit(f"axis norm {np.linalg.norm(axis)!r} is not 1")
    w = skew(axis)
    return np.eye(3) + np.sin(angle) * w + (1.0 - np.cos(angle)) * (w @ w)


def is_rotation(m, tol: float = STRUCT_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    return bool(
        np.max(np.abs(m.T @ m - np.eye(3))) <= tol and abs(np.linalg.det(m) - 1.0) <= tol
    )


def as_rotation(m, tol: float = STRUCT_TOL) -> np.ndarray:
    """Validate and return ``m`` as a float rotation matrix.

    Raises:
        NotRotation: if ``m`` is not orthogonal with determinant +1.
    """
    m = np.array(m, dtype=float)
    if m.shape == (9,):
        m = m.reshape(3, 3)
    if not is_rotation(m, tol):
        raise NotRotation("matrix is not a proper rotation")
    return m


def orthonormalize(m) -> np.ndarray:
    """Gram-Schmidt on the columns, keeping the third column right-handed."""
    m = np.asarray(m, dtype=float)
    x = m[:, 0] / np.linalg.norm(m[:, 0])
    t = m[:, 1] - (x @ m[:, 1]) * x
    t /= np.linalg.norm(t)
    return np.column_stack([x, t, np.cross(x, t)])


def log_vec(m) -> np.ndarray:
    """Rotation vector (axis times angle) of the rotation ``m``.

    Stable near both 0 and pi.
    """
    m = np.asarray(m, dtype=float)
    v = vee(m)
    s = np.linalg.norm(v)
    c = 0.5 * (np.trace(m) - 1.0)
    theta = np.arctan2(s, c)
    if s < 1e-7 and c < 0.0:
        # near pi: axis from the symmetric part, sign fixed by the small vee
        b = 0.5 * (m + m.T) - c * np.eye(3)
        u = b[:, int(np.argmax(np.diag(b)))]
        u = u / np.linalg.norm(u)
        if u @ v < 0.0:
            u = -u
        return theta * u
    if s < 1e-300:
        return np.zeros(3)
    return (theta / s) * v


def rotation_angle_between(a, b) -> float:
    """Geodesic distance on SO(3): the rotation angle of ``a.T @ b``, in [0, pi].

    Equal to ``arccos((trace(a.T b) - 1) / 2)`` but evaluated through
    ``atan2`` so that angles below 1e-8 keep full precision.
    """
    m = np.asarray(a, dtype=float).T @ np.asarray(b, dtype=float)
    c = min(1.0, max(-1.0, 0.5 * (np.trace(m) - 1.0)))
    return float(np.arctan2(np.linalg.norm(vee(m)), c))


def fixed_directions(rot, tol: float = 1e-12):
    """Unit vectors left fixed by ``rot``.

    Returns :data:`ALL_DIRECTIONS` for the identity, otherwise the pair
    ``(u, -u)`` spanning the rotation axis.
    """
    rot = np.asarray(rot, dtype=float)
    if rotation_angle_between(np.eye(3), rot) <= tol:
        return ALL_DIRECTIONS
    # null vector of (rot - I): right singular vector of the smallest singular value
    _, _, vt = np.linalg.svd(rot - np.eye(3))
    u = vt[-1] / np.linalg.norm(vt[-1])
    return (u, -u)
