# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled multi-start damped Newton; same algorithm as ``_newton_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt, atan2, fabs

cnp.import_array()

cdef double SINGULAR_TOL = 1e-14


cdef void _endpoint(const double[:, ::1] w, const double[:, ::1] w2, const Py_ssize_t[::1] free_index,
                    const double* theta, double* e) noexcept nogil:
    cdef double rot[9]
    cdef double tmp[9]
    cdef Py_ssize_t i, a, b, c, n = free_index.shape[0]
    cdef double s, v
    for a in range(9):
        e[a] = 0.0
    e[0] = 1.0; e[4] = 1.0; e[8] = 1.0
    for i in range(n):
        s = sin(theta[free_index[i]])
        v = 1.0 - cos(theta[free_index[i]])
        for a in range(9):
            rot[a] = s * w[i, a] + v * w2[i, a]
        rot[0] += 1.0; rot[4] += 1.0; rot[8] += 1.0
        for a in range(3):
            for b in range(3):
                tmp[3 * a + b] = 0.0
                for c in range(3):
                    tmp[3 * a + b] += e[3 * a + c] * rot[3 * c + b]
        for a in range(9):
            e[a] = tmp[a]


cdef double _log_residual(const double[:, ::1] w, const double[:, ::1] w2, const Py_ssize_t[::1] free_index,
                          const double[:, ::1] goal, const double* theta, double* out) noexcept nogil:
    cdef double e[9]
    cdef double d[9]
    cdef double b[9]
    cdef Py_ssize_t a, i, j, k
    cdef double s, c, ang, vx, vy, vz, best, nu
    _endpoint(w, w2, free_index, theta, e)
    # d = e.T @ goal
    for i in range(3):
        for j in range(3):
            d[3 * i + j] = e[i] * goal[0, j] + e[3 + i] * goal[1, j] + e[6 + i] * goal[2, j]
    vx = 0.5 * (d[7] - d[5])
    vy = 0.5 * (d[2] - d[6])
    vz = 0.5 * (d[3] - d[1])
    s = sqrt(vx * vx + vy * vy + vz * vz)
    c = 0.5 * (d[0] + d[4] + d[8] - 1.0)
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    ang = atan2(s, c)
    if s < 1e-7 and c < 0.0:
        for i in range(3):
            for j in range(3):
                b[3 * i + j] = 0.5 * (d[3 * i + j] + d[3 * j + i])
            b[4 * i] -= c
        k = 0
        best = b[0]
        for i in range(1, 3):
            if b[4 * i] > best:
                best = b[4 * i]
                k = i
        nu = sqrt(b[k] * b[k] + b[3 + k] * b[3 + k] + b[6 + k] * b[6 + k])
        out[0] = b[k] / nu
        out[1] = b[3 + k] / nu
        out[2] = b[6 + k] / nu
        if out[0] * vx + out[1] * vy + out[2] * vz < 0.0:
            for i in range(3):
                out[i] = -out[i]
        for i in range(3):
            out[i] *= ang
    elif s > 1e-300:
        out[0] = ang / s * vx
        out[1] = ang / s * vy
        out[2] = ang / s * vz
    else:
        out[0] = 0.0; out[1] = 0.0; out[2] = 0.0
    return ang


cdef bint _solve_step(double* jac, Py_ssize_t k, const double* f, double* step) noexcept nogil:
    """Newton step for k == 3, Gauss-Newton step for k < 3. jac is 3 x k row-major."""
    cdef double m[9]
    cdef double rhs[3]
    cdef Py_ssize_t i, j, l, p
    cdef double t, det
    if k == 3:
        for i in range(9):
            m[i] = jac[i]
        for i in range(3):
            rhs[i] = f[i]
    else:
        for i in range(k):
            rhs[i] = 0.0
            for l in range(3):
                rhs[i] += jac[l * k + i] * f[l]
            for j in range(k):
                m[i * k + j] = 0.0
                for l in range(3):
                    m[i * k + j] += jac[l * k + i] * jac[l * k + j]
    # same singularity test as the numpy fallback: |det| of the k x k system
    if k == 1:
        det = m[0]
    elif k == 2:
        det = m[0] * m[3] - m[1] * m[2]
    else:
        det = (m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
               + m[2] * (m[3] * m[7] - m[4] * m[6]))
    if fabs(det) <= SINGULAR_TOL:
        return False
    # Gaussian elimination with partial pivoting
    for i in range(k):
        p = i
        for j in range(i + 1, k):
            if fabs(m[j * k + i]) > fabs(m[p * k + i]):
                p = j
        if p != i:
            for j in range(k):
                t = m[i * k + j]; m[i * k + j] = m[p * k + j]; m[p * k + j] = t
            t = rhs[i]; rhs[i] = rhs[p]; rhs[p] = t
        for j in range(i + 1, k):
            t = m[j * k + i] / m[i * k + i]
            for l in range(i, k):
                m[j * k + l] -= t * m[i * k + l]
            rhs[j] -= t * rhs[i]
    for i in range(k - 1, -1, -1):
        t = rhs[i]
        for j in range(i + 1, k):
            t -= m[i * k + j] * step[j]
        step[i] = t / m[i * k + i]
    return True


def newton_multistart(axes, free_index, goal, starts, int max_iter=60, double fd_step=1e-7,
                      double stop_tol=1e-14, double min_damping=1e-6):
    """Run damped Newton from every row of ``starts``; see ``_newton_py``."""
    cdef double[:, ::1] ax = np.ascontiguousarray(axes, dtype=np.float64)
    cdef Py_ssize_t[::1] fi = np.ascontiguousarray(free_index, dtype=np.intp)
    cdef double[:, ::1] g = np.ascontiguousarray(goal, dtype=np.float64)
    theta_arr = np.array(starts, dtype=np.float64, ndmin=2, copy=True, order="C")
    cdef double[:, ::1] theta = theta_arr
    cdef Py_ssize_t m = theta.shape[0], k = theta.shape[1], n = ax.shape[0]
    res_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] res = res_arr
    w_arr = np.zeros((n, 9))
    cdef double[:, ::1] w = w_arr
    cdef Py_ssize_t i, j, l, it, s_
    for i in range(n):
        w[i, 1] = -ax[i, 2]; w[i, 2] = ax[i, 1]
        w[i, 3] = ax[i, 2]; w[i, 5] = -ax[i, 0]
        w[i, 6] = -ax[i, 1]; w[i, 7] = ax[i, 0]
    w2_arr = np.einsum("nij,njk->nik", w_arr.reshape(n, 3, 3), w_arr.reshape(n, 3, 3)).reshape(n, 9).copy()
    cdef double[:, ::1] w2 = w2_arr
    cdef double th[3]
    cdef double trial[3]
    cdef double fv[3]
    cdef double pv[3]
    cdef double tv[3]
    cdef double jac[9]
    cdef double step[3]
    cdef double f, tf, lam
    cdef bint improved
    with nogil:
        for s_ in range(m):
            for j in range(k):
                th[j] = theta[s_, j]
            f = _log_residual(w, w2, fi, g, th, fv)
            for it in range(max_iter):
                if f < stop_tol:
                    break
                for j in range(k):
                    for l in range(k):
                        trial[l] = th[l]
                    trial[j] = th[j] + fd_step
                    _log_residual(w, w2, fi, g, trial, pv)
                    for l in range(3):
                        jac[l * k + j] = (pv[l] - fv[l]) / fd_step
                if not _solve_step(jac, k, fv, step):
                    break
                lam = 1.0
                improved = False
                while lam >= min_damping:
                    for j in range(k):
                        trial[j] = th[j] - lam * step[j]
                    tf = _log_residual(w, w2, fi, g, trial, tv)
                    if tf < f:
                        improved = True
                        break
                    lam *= 0.5
                if not improved:
                    break
                for j in range(k):
                    th[j] = trial[j]
                for l in range(3):
                    fv[l] = tv[l]
                f = tf
            for j in range(k):
                theta[s_, j] = th[j]
            res[s_] = f
    return theta_arr, res_arr
