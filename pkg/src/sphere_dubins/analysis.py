"""Numerical checks of the LRL -> RLR perturbation argument and its matrix identities.

A CCCC path ``L_alpha R_{pi+phi} L_{pi+phi} ...`` can be rewritten near
``alpha = 0`` as ``R_{pi+phi+xi} L_{pi+phi+eta} R_beta`` with

    xi(alpha)   = a1 alpha + b1 alpha^2 / 2 + ...
    eta(alpha)  = a2 alpha + b2 alpha^2 / 2 + ...
    beta(alpha) = a3 alpha + b3 alpha^2 / 2 + ...

The closed forms give ``a1 + a2 + a3 = 1`` and ``b1 + b2 + b3 < 0`` for
``r <= 1/2``, so the rewritten path is strictly shorter.

Two generator conventions appear here. ``conjugate`` is the model's pair
conjugated by ``diag(1, -1, 1)``, i.e. ``[[0, r, 0], [-r, 0, -/+kx],
[0, +/-kx, 0]]`` with ``u_L = (-kx, 0, r)``; the perturbation equation is
solved in it, so ``xi, eta, beta`` transfer to the model unchanged.
``axial`` is ``skew((kx, 0, r))`` for L and ``skew((-kx, 0, r))`` for R
with ``u_L = (kx, 0, r)``; the identity suite uses it. Every identity holds
in both.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, SolveFailed
from .model import PathSpec, Segment
from .so3 import log_vec, rotation_angle_between

DEFAULT_ALPHAS = tuple(k * 1e-3 for k in range(1, 9))
NEWTON_TOL = 1e-12


@dataclass(frozen=True)
class PerturbationCoeffs:
    a1: float
    a2: float
    a3: float
    b12: float
    b3: float
    bsum: float

    def to_dict(self) -> dict:
        return asdict(self)


def _kx(r):
    return math.sqrt(1.0 - r * r)


def _rodrigues(w, angle):
    return np.eye(3) + math.sin(angle) * w + (1.0 - math.cos(angle)) * (w @ w)


def literal_generators(r: float, convention: str = "conjugate"):
    """``(Omega_L, Omega_R, u_L, u_R)`` in the ``conjugate`` or ``axial`` convention."""
    kx = _kx(r)
    if convention == "conjugate":
        wl = np.array([[0.0, r, 0.0], [-r, 0.0, -kx], [0.0, kx, 0.0]])
        wr = np.array([[0.0, r, 0.0], [-r, 0.0, kx], [0.0, -kx, 0.0]])
        return wl, wr, np.array([-kx, 0.0, r]), np.array([kx, 0.0, r])
    if convention == "axial":
        wl = np.array([[0.0, -r, 0.0], [r, 0.0, -kx], [0.0, kx, 0.0]])
        wr = np.array([[0.0, -r, 0.0], [r, 0.0, kx], [0.0, -kx, 0.0]])
        return wl, wr, np.array([kx, 0.0, r]), np.array([-kx, 0.0, r])
    raise ValueError(f"unknown convention {convention!r}")


def _check_domain(r, phi, r_max):
    if not (0.0 < r <= r_max):
        raise DomainError(f"r = {r!r} outside (0, {r_max:g}]")
    if not (0.0 < phi < math.pi):
        raise DomainError(f"phi = {phi!r} outside (0, pi)")


def perturbation_closed(r: float, phi: float) -> PerturbationCoeffs:
    """Closed-form first- and second-order coefficients for ``r in (0, 1/2]``, ``phi in (0, pi)``."""
    _check_domain(r, phi, 0.5)
    s, c = math.sin(phi), math.cos(phi)
    a2 = 1.0 - 2.0 * r * r * (1.0 + c)
    a1 = -a2
    b12 = 2.0 * a1 * (1.0 + (1.0 - 2.0 * r * r) * (1.0 + c)) / s
    b3 = 2.0 * a1 * c / s
    bsum = 4.0 * a1 * (1.0 + c) * (1.0 - r * r) / s
    return PerturbationCoeffs(a1, a2, 1.0, b12, b3, bsum)


def solve_perturbation(r: float, phi: float, alpha: float, max_iter: int = 50, fd_step: float = 1e-7):
    """``(xi, eta, beta)`` for one ``alpha``, by Newton from zero.

    Raises:
        SolveFailed: the residual rotation angle stays above 1e-12.
    """
    wl, wr, _, _ = literal_generators(r, "conjugate")
    big = math.pi + phi
    lhs = _rodrigues(wl, alpha) @ _rodrigues(wr, big) @ _rodrigues(wl, big)

    def rhs(x):
        return _rodrigues(wr, big + x[0]) @ _rodrigues(wl, big + x[1]) @ _rodrigues(wr, x[2])

    def f(x):
        return log_vec(rhs(x).T @ lhs)

    x = np.zeros(3)
    fx = f(x)
    for _ in range(max_iter):
        if np.linalg.norm(fx) < 1e-15:
            break
        jac = np.empty((3, 3))
        for j in range(3):
            trial = x.copy()
            trial[j] += fd_step
            jac[:, j] = (f(trial) - fx) / fd_step
        x = x - np.linalg.solve(jac, fx)
        fx = f(x)
    res = rotation_angle_between(rhs(x), lhs)
    if not res < NEWTON_TOL:
        raise SolveFailed(f"perturbation solve at alpha = {alpha:g} left residual {res:.3g}")
    return x


def perturbation_numeric(r: float, phi: float, alphas=DEFAULT_ALPHAS) -> PerturbationCoeffs:
    """Coefficients fitted to solved ``(xi, eta, beta)`` over ``alphas``.

    The fit is a least-squares polynomial without constant term, of degree
    ``min(6, len(alphas) - 1)``; the terms above second order absorb the
    truncation error.
    """
    if not (0.0 < r < 1.0):
        raise DomainError(f"r = {r!r} outside (0, 1)")
    if not (0.0 < phi < math.pi):
        raise DomainError(f"phi = {phi!r} outside (0, pi)")
    alphas = np.asarray(alphas, dtype=float)
    if len(alphas) < 4:
        raise DomainError("at least four alpha values are needed")
    sols = np.array([solve_perturbation(r, phi, a) for a in alphas])
    deg = min(6, len(alphas) - 1)
    vander = np.stack([alphas**k for k in range(1, deg + 1)], axis=1)
    coef = np.linalg.lstsq(vander, sols, rcond=None)[0]
    a1, a2, a3 = coef[0]
    b1, b2, b3 = 2.0 * coef[1]
    return PerturbationCoeffs(a1, a2, a3, b1 + b2, b3, b1 + b2 + b3)


def delta(r: float, phi: float, alpha: float) -> float:
    """Length saving ``alpha - xi - eta - beta`` (in units of ``r``) of the rewrite."""
    xi, eta, beta = solve_perturbation(r, phi, alpha)
    return alpha - xi - eta - beta


def rlr_shortcut(r: float, phi: float, alpha: float) -> tuple[PathSpec, PathSpec]:
    """The path ``L_alpha R_{pi+phi} L_{pi+phi}`` and its RLR rewrite, in the model's convention."""
    xi, eta, beta = solve_perturbation(r, phi, alpha)
    big = math.pi + phi
    lrl = PathSpec(r, (Segment("L", alpha), Segment("R", big), Segment("L", big)))
    rlr = PathSpec(r, (Segment("R", big + xi), Segment("L", big + eta), Segment("R", beta)))
    return lrl, rlr


def identity_suite(r: float, phi: float) -> list:
    """``(name, closed_form, product)`` for each matrix identity behind the coefficients.

    Products are literal ``u^T Omega^k R_R(pi+phi) R_L(pi+phi) ...``
    evaluations; names encode where the generator powers sit.
    """
    if not (0.0 < r < 1.0):
        raise DomainError(f"r = {r!r} outside (0, 1)")
    if not (0.0 < phi < math.pi):
        raise DomainError(f"phi = {phi!r} outside (0, pi)")
    wl, wr, ul, ur = literal_generators(r, "axial")
    big = math.pi + phi
    rr, rl = _rodrigues(wr, big), _rodrigues(wl, big)
    e2 = np.array([0.0, 1.0, 0.0])
    s, c = math.sin(phi), math.cos(phi)
    k = 4.0 * r * r * (1.0 - r * r)
    q = 1.0 - 2.0 * r * r
    lr_first = k * s * (c - q * (1.0 + c))
    lr_second = -k * (1.0 - c * c + q * c * (1.0 + c))
    return [
        ("e2_LL", -1.0, e2 @ wl @ wl @ e2),
        ("e2_RL", q, e2 @ wr @ wl @ e2),
        ("e2_LR", q, e2 @ wl @ wr @ e2),
        ("e2_RRL", 0.0, e2 @ wr @ wr @ wl @ e2),
        ("A100LR", lr_first, ul @ wr @ rr @ rl @ ur),
        ("A010LR", lr_first, ul @ rr @ rl @ wl @ ur),
        ("A000RL", -k * s, ur @ wl @ rr @ ul),
        ("A001RL", -k * s, ur @ rl @ wr @ ul),
        ("A000RR", k * s * (1.0 - 2.0 * r * r * (1.0 + c)), ur @ wl @ rr @ rl @ ur),
        ("A010RR", k * s, ur @ rl @ wl @ ur),
        ("A200LR", lr_second, ul @ wr @ wr @ rr @ rl @ ur),
        ("A110LR", k * (c * c + q * (1.0 - c * c)), ul @ wr @ rr @ rl @ wl @ ur),
        ("A020LR", lr_second, ul @ rr @ rl @ wl @ wl @ ur),
        ("B000RL", k * q * (1.0 + c), ur @ wl @ wl @ rr @ rl @ ul),
        ("A011RL", -k * c, ur @ rr @ rl @ wl @ wr @ ul),
        ("A002RL", k * q * (1.0 + c), ur @ rl @ wr @ wr @ ul),
    ]
