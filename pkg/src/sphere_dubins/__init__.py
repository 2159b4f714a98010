"""Shortest curvature-bounded (Dubins) paths on the unit sphere.

A configuration is a rotation whose columns are the position ``X``, the
tangent ``T`` and the normal ``N``. Paths are words over ``L``, ``R`` (small
circles of radius ``r``) and ``G`` (great circles).
"""

from .analysis import (
    PerturbationCoeffs,
    delta,
    identity_suite,
    perturbation_closed,
    perturbation_numeric,
    rlr_shortcut,
)
from .errors import (
    Degenerate,
    DomainError,
    NoPathFound,
    NotRotation,
    NotSkew,
    NotUnit,
    SolveFailed,
    SphereDubinsError,
)
from .experiments import SweepConfig, SweepRow, emit_csv, existence_study, read_csv, run_sweep
from .kernels import BACKEND
from .model import (
    Config,
    PathSpec,
    Segment,
    TurnRadius,
    ode_oracle_propagate,
    path_endpoint,
    path_length,
    propagate,
    sample_path,
)
from .planner import PlanResult, classify, plan
from .pmp import AdjointState, CertificateReport, adjoint_propagate, hamiltonian, pmp_certificate
from .so3 import ALL_DIRECTIONS, axial, exp_skew, fixed_directions, rotation_angle_between, skew
from .solver import CandidateSolution, SolveOptions, enumerate_families, residual, solve_family

__version__ = "0.1.0"

__all__ = [
    "ALL_DIRECTIONS", "AdjointState", "BACKEND", "CandidateSolution", "CertificateReport", "Config",
    "Degenerate", "DomainError", "NoPathFound", "NotRotation", "NotSkew", "NotUnit", "PathSpec",
    "PerturbationCoeffs", "PlanResult", "Segment", "SolveFailed", "SolveOptions", "SphereDubinsError",
    "SweepConfig", "SweepRow", "TurnRadius", "adjoint_propagate", "axial", "classify", "delta",
    "emit_csv", "enumerate_families", "existence_study", "exp_skew", "fixed_directions", "hamiltonian",
    "identity_suite", "ode_oracle_propagate", "path_endpoint", "path_length", "perturbation_closed",
    "perturbation_numeric", "plan", "pmp_certificate", "propagate", "read_csv", "residual",
    "rlr_shortcut", "rotation_angle_between", "run_sweep", "sample_path", "skew", "solve_family",
]
