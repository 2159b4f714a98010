import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphere_dubins.model import PathSpec, TurnRadius, curvature
from sphere_dubins.pmp import (
    AdjointState,
    adjoint_matrix,
    adjoint_propagate,
    adjoint_trajectory,
    anchor_b0,
    hamiltonian,
    pmp_certificate,
    structural_violations,
)

states = st.tuples(*[st.floats(-3, 3)] * 3).map(lambda t: AdjointState(*t))


def test_zero_angle_is_identity():
    psi = AdjointState(0.3, -0.2, 0.9)
    for d in "LRG":
        assert np.allclose(adjoint_propagate(psi, d, 0.0, 0.4).as_array(), psi.as_array())


def test_worked_example():
    out = adjoint_propagate(AdjointState(0.0, 1.0, -1.0), "R", math.pi / 2, 0.5)
    assert out.A == pytest.approx(0.066987298, abs=1e-9)
    assert out.B == pytest.approx(-0.866025404, abs=1e-9)
    assert out.C == pytest.approx(-1.116025404, abs=1e-9)
    assert out.norm() ** 2 == pytest.approx(2.0, abs=1e-12)


@given(states, st.sampled_from("LRG"), st.floats(-10, 10), st.floats(0.01, 0.99))
def test_norm_conserved(psi, d, phi, r):
    assert adjoint_propagate(psi, d, phi, r).norm() == pytest.approx(psi.norm(), abs=1e-12)


@given(st.sampled_from("LRG"), st.floats(0.01, 0.99))
def test_matrix_generates_costate_flow(d, r):
    # d/ds (A, B, C) = (B, -A + u C, -u B); per unit angle multiply by the arc-length scale
    h = 1e-6
    m = (adjoint_matrix(d, h, r) - adjoint_matrix(d, -h, r)) / (2 * h)
    u = curvature(d, r)
    scale = 1.0 if d == "G" else r
    expected = scale * np.array([[0, 1, 0], [-1, 0, u], [0, -u, 0]])
    assert np.allclose(m, expected, atol=1e-7)


def test_hamiltonian_examples():
    for u in (-3.0, 0.0, 1.7):
        assert hamiltonian(AdjointState(0.0, 0.4, -1.0), u) == 0.0
    assert hamiltonian(AdjointState(1.0, 0.0, -1.0), 0.0) == 0.0
    assert hamiltonian(AdjointState(1.0, 0.0, -1.0), 2.0) == 2.0


def test_single_geodesic_passes():
    assert pmp_certificate(PathSpec(0.4, (("G", 1.0),))).passed


def test_gcg_fails():
    rep = pmp_certificate(PathSpec(0.4, (("G", 0.5), ("L", 1.0), ("G", 0.5))))
    assert not rep.passed
    assert "GCG" in rep.rules()


@pytest.mark.parametrize("word", ["GLR", "LRG", "GRL"])
def test_gcc_and_ccg_fail(word):
    rep = structural_violations(PathSpec.from_word(0.4, word, (1.0, 4.0, 1.0)))
    assert rep.rules() & {"GCC", "CCG"}


def test_perturbed_lrl_switching_conditions():
    p = PathSpec(0.4, (("L", 1.0), ("R", math.pi + 0.5), ("L", math.pi + 0.5)))
    rep = pmp_certificate(p)
    assert not rep.rules() & {"switch", "hamiltonian", "CCC_middle", "abnormal"}


def test_short_middle_fails():
    rep = pmp_certificate(PathSpec(0.4, (("L", 0.5), ("R", 2.0), ("L", 0.5))))
    assert "CCC_middle" in rep.rules()


def test_cccc_rules():
    ok = PathSpec(0.6, (("L", 0.3), ("R", 4.0), ("L", 4.0), ("R", 0.3)))
    assert not structural_violations(ok).rules() & {"CCCC_equal", "CCCC_middle"}
    unequal = PathSpec(0.6, (("L", 0.3), ("R", 4.0), ("L", 4.2), ("R", 0.3)))
    assert "CCCC_equal" in structural_violations(unequal).rules()
    assert "segment_count" in structural_violations(PathSpec(0.4, ok.segments)).rules()


def test_teardrop_anchor_is_abnormal():
    p = PathSpec(math.sqrt(3) / 2, (("L", math.pi), ("R", math.pi), ("L", math.pi)))
    assert anchor_b0(p) is None
    assert "abnormal" in pmp_certificate(p).rules()
    # still structurally admissible: middle angle at the closed boundary
    assert structural_violations(p).passed


def test_report_json():
    rep = pmp_certificate(PathSpec(0.4, (("G", 0.5), ("L", 1.0), ("G", 0.5))))
    data = json.loads(rep.to_json())
    assert data["pass"] is False
    assert {"rule", "s", "magnitude"} <= set(data["violations"][0])


@pytest.mark.parametrize(
    "word,angles,r",
    [("LRL", (1.0, 4.0, 1.0), 0.4), ("RLR", (0.6, 4.5, 2.0), 0.3), ("LGR", (1.0, 2.0, 0.7), 0.45)],
)
def test_hamiltonian_constant_along_trajectory(word, angles, r):
    rows = adjoint_trajectory(PathSpec.from_word(r, word, angles))
    h = [1 + c + u * a for _, u, a, _, c in rows]
    assert max(abs(x) for x in h) < 1e-8
    assert max(abs(math.sqrt(a * a + b * b + c * c) - math.sqrt(rows[0][2] ** 2 + rows[0][3] ** 2 + rows[0][4] ** 2))
               for _, _, a, b, c in rows) < 1e-12


def test_middle_arc_extremum_at_midpoint():
    r, phi = 0.4, 4.0
    p = PathSpec(r, (("L", 1.0), ("R", phi), ("L", 1.0)))
    b0 = anchor_b0(p)
    mid = adjoint_propagate(AdjointState(0.0, b0, -1.0), "R", phi / 2, r)
    assert abs(mid.B) < 1e-8
    end = adjoint_propagate(AdjointState(0.0, b0, -1.0), "R", phi, r)
    assert abs(end.A) < 1e-12 and end.C == pytest.approx(-1.0, abs=1e-12)
    assert math.cos(phi / 2) < 0


def test_great_arc_costate_is_unit():
    p = PathSpec(0.3, (("L", 1.0), ("G", 2.0), ("R", 0.8)))
    assert anchor_b0(p) == 0.0
    rows = adjoint_trajectory(p)
    assert all(abs(a * a + b * b + c * c - 1) < 1e-12 for _, _, a, b, c in rows)


def test_radius_object_accepted():
    psi = AdjointState(0.1, 0.2, 0.3)
    assert adjoint_propagate(psi, "L", 1.0, TurnRadius(0.4)) == adjoint_propagate(psi, "L", 1.0, 0.4)
