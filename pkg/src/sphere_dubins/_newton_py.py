"""Pure-numpy multi-start damped Newton; fallback for the compiled kernel.

All starts advance together as one batch. The algorithm matches
``_newton.pyx`` step for step: forward-difference Jacobian of the rotation
log-residual, full Newton step for square systems, Gauss-Newton otherwise,
step halving until the residual decreases.
"""

from __future__ import annotations

import numpy as np

SINGULAR_TOL = 1e-14


def _skews(axes):
    w = np.zeros((len(axes), 3, 3))
    w[:, 0, 1], w[:, 0, 2] = -axes[:, 2], axes[:, 1]
    w[:, 1, 0], w[:, 1, 2] = axes[:, 2], -axes[:, 0]
    w[:, 2, 0], w[:, 2, 1] = -axes[:, 1], axes[:, 0]
    return w


def _log_residual(theta, w, w2, free_index, goal):
    """Rotation vectors of ``E(theta).T @ goal`` for a batch, plus their norms."""
    m = theta.shape[0]
    e = np.broadcast_to(np.eye(3), (m, 3, 3)).copy()
    for i, j in enumerate(free_index):
        a = theta[:, j]
        rot = np.eye(3) + np.sin(a)[:, None, None] * w[i] + (1.0 - np.cos(a))[:, None, None] * w2[i]
        e = e @ rot
    d = np.swapaxes(e, 1, 2) @ goal
    v = 0.5 * np.stack([d[:, 2, 1] - d[:, 1, 2], d[:, 0, 2] - d[:, 2, 0], d[:, 1, 0] - d[:, 0, 1]], axis=1)
    s = np.linalg.norm(v, axis=1)
    c = np.clip(0.5 * (np.trace(d, axis1=1, axis2=2) - 1.0), -1.0, 1.0)
    ang = np.arctan2(s, c)
    out = np.zeros_like(v)
    ok = s > 1e-300
    out[ok] = (ang[ok] / s[ok])[:, None] * v[ok]
    near_pi = (s < 1e-7) & (c < 0.0)
    if np.any(near_pi):
        b = 0.5 * (d[near_pi] + np.swapaxes(d[near_pi], 1, 2)) - c[near_pi][:, None, None] * np.eye(3)
        k = np.argmax(np.diagonal(b, axis1=1, axis2=2), axis=1)
        u = b[np.arange(len(k)), :, k]
        u /= np.linalg.norm(u, axis=1)[:, None]
        flip = np.einsum("ij,ij->i", u, v[near_pi]) < 0.0
        u[flip] *= -1.0
        out[near_pi] = ang[near_pi][:, None] * u
    return out, ang


def newton_multistart(axes, free_index, goal, starts, max_iter=60, fd_step=1e-7, stop_tol=1e-14, min_damping=1e-6):
    """Run damped Newton from every row of ``starts``.

    Args:
        axes: ``(n_seg, 3)`` unit rotation axes, in traversal order.
        free_index: ``(n_seg,)`` index of the free angle driving each segment.
        goal: ``(3, 3)`` target rotation.
        starts: ``(m, k)`` initial free angles.

    Returns:
        ``(angles, residual)`` with shapes ``(m, k)`` and ``(m,)``; the
        residual is the rotation angle between endpoint and goal.
    """
    axes = np.ascontiguousarray(axes, dtype=float)
    free_index = np.asarray(free_index, dtype=np.intp)
    goal = np.ascontiguousarray(goal, dtype=float)
    theta = np.array(starts, dtype=float, ndmin=2, copy=True)
    m, k = theta.shape
    w = _skews(axes)
    w2 = w @ w
    f_vec, f = _log_residual(theta, w, w2, free_index, goal)
    active = np.ones(m, dtype=bool)
    eye_k = np.eye(k)
    for _ in range(max_iter):
        active &= f >= stop_tol
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        th, fv = theta[idx], f_vec[idx]
        jac = np.empty((idx.size, 3, k))
        for j in range(k):
            pert, _ = _log_residual(th + fd_step * eye_k[j], w, w2, free_index, goal)
            jac[:, :, j] = (pert - fv) / fd_step
        if k == 3:
            det = np.linalg.det(jac)
            ok = np.abs(det) > SINGULAR_TOL
            step = np.zeros((idx.size, 3))
            if np.any(ok):
                step[ok] = np.linalg.solve(jac[ok], fv[ok][:, :, None])[:, :, 0]
        else:
            jtj = np.swapaxes(jac, 1, 2) @ jac
            det = np.linalg.det(jtj)
            ok = np.abs(det) > SINGULAR_TOL
            step = np.zeros((idx.size, k))
            if np.any(ok):
                rhs = np.swapaxes(jac[ok], 1, 2) @ fv[ok][:, :, None]
                step[ok] = np.linalg.solve(jtj[ok], rhs)[:, :, 0]
        active[idx[~ok]] = False
        pending = ok.copy()
        lam = 1.0
        while np.any(pending) and lam >= min_damping:
            sel = np.flatnonzero(pending)
            trial = th[sel] - lam * step[sel]
            tv, tf = _log_residual(trial, w, w2, free_index, goal)
            better = tf < f[idx[sel]]
            acc = sel[better]
            theta[idx[acc]] = trial[better]
            f_vec[idx[acc]] = tv[better]
            f[idx[acc]] = tf[better]
            pending[acc] = False
            lam *= 0.5
        active[idx[pending]] = False
    return theta, f
