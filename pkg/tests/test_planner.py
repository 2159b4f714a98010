import json
import math

import numpy as np
import pytest

from sphere_dubins.errors import NoPathFound, NotRotation
from sphere_dubins.model import word_endpoint, word_length
from sphere_dubins.planner import _pick, classify, plan
from sphere_dubins.so3 import exp_skew
from sphere_dubins.solver import CandidateSolution

REVERSAL = np.diag([1.0, -1.0, -1.0])
MIRROR = np.diag([1.0, 1.0, -1.0])


def test_identity_goal_is_empty_path():
    res = plan(np.eye(3), 0.4)
    assert res.best.family == "" and res.best.length == 0.0


def test_teardrop_is_best_at_threshold():
    r = math.sqrt(3) / 2
    res = plan(REVERSAL, r)
    assert res.best.family in ("LRL", "RLR")
    assert res.best.length == pytest.approx(3 * math.pi * r, abs=1e-6)
    assert all(abs(a - math.pi) < 1e-4 for a in res.best.angles)
    assert not res.certified
    assert res.warnings


def test_perturbed_lrl_is_beaten():
    r, phi, alpha = 0.4, math.pi / 2, math.radians(1)
    goal = word_endpoint("LRL", (alpha, math.pi + phi, math.pi + phi), r)
    res = plan(goal, r)
    assert res.best.family != "LRL"
    assert res.best.length < word_length("LRL", (alpha, math.pi + phi, math.pi + phi), r)
    assert res.certified and not res.warnings


def test_inadmissible_candidates_kept_but_not_best():
    r, phi, alpha = 0.4, math.pi / 2, math.radians(1)
    res = plan(word_endpoint("LRL", (alpha, math.pi + phi, math.pi + phi), r), r)
    flagged = [c for c in res.candidates if not c.admissible]
    assert flagged
    assert res.best.admissible
    assert res.best.length == min(c.length for c in res.candidates if c.admissible)


def test_no_path_beyond_three_segment_threshold():
    with pytest.raises(NoPathFound):
        plan(REVERSAL, 0.95)


def test_rejects_non_rotation():
    with pytest.raises(NotRotation):
        plan(np.diag([1.0, 1.0, -1.0]), 0.4)


def test_classify_geodesic():
    assert classify(exp_skew((0, 0, 1), 1.0), 0.4) == "G"


def test_classify_reversal_at_half():
    assert len(classify(REVERSAL, 0.5)) <= 3


def test_classify_mirror(rng):
    for _ in range(5):
        r = rng.uniform(0.1, 0.5)
        goal = word_endpoint("LGR", rng.uniform(0.3, 5.5, 3), r)
        a = classify(goal, r)
        b = classify(MIRROR @ goal @ MIRROR, r)
        assert b == a.translate(str.maketrans("LR", "RL"))


def test_tie_break_prefers_fewer_segments():
    a = CandidateSolution("LRL", (1.0, 4.0, 1.0), 0.0, 2.0)
    b = CandidateSolution("LR", (1.0, 4.0), 0.0, 2.0 + 5e-10)
    c = CandidateSolution("GL", (1.0, 4.0), 0.0, 2.0 + 5e-10)
    assert _pick([a, b, c]).family == "GL"


def test_result_json():
    data = json.loads(plan(exp_skew((0, 0, 1), 1.0), 0.4).to_json())
    assert data["best"]["family"] == "G"
    assert data["certified"] is True


def test_wide_radius_warns():
    res = plan(exp_skew((0, 0, 1), 1.0), 0.6)
    assert res.warnings and not res.certified


def test_best_never_forbidden_pattern(rng):
    for _ in range(30):
        r = rng.uniform(0.05, 0.5)
        axis = rng.normal(size=3)
        goal = exp_skew(axis / np.linalg.norm(axis), rng.uniform(0, math.pi))
        best = plan(goal, r).best
        pattern = "".join("G" if d == "G" else "C" for d in best.family)
        assert not any(p in pattern for p in ("GCG", "GCC", "CCG"))
        if pattern == "CCC":
            assert best.angles[1] > math.pi - 1e-6
        assert len(best.family) <= 3
