import math

import numpy as np
import pytest

from sphere_dubins.kernels import compiled_available, get_newton
from sphere_dubins.model import PathSpec, path_endpoint, word_endpoint, word_length
from sphere_dubins.so3 import exp_skew, rotation_angle_between
from sphere_dubins.solver import (
    FAMILIES,
    SolveOptions,
    check_family,
    enumerate_families,
    free_index,
    residual,
    solve_all,
    solve_family,
)

MIRROR = np.diag([1.0, 1.0, -1.0])
SWAP = str.maketrans("LR", "RL")
needs_compiled = pytest.mark.skipif(not compiled_available(), reason="compiled kernel not built")


def forward(word, angles, r):
    return word_endpoint(word, angles, r)


def test_residual_examples():
    assert residual("G", (0.0,), np.eye(3), 0.5) == 0.0
    assert residual("G", (1.0,), exp_skew((0, 0, 1), 1.0), 0.5) == 0.0
    goal = forward("LRL", (0.7, 4.0, 3.9), 0.4)
    assert residual("LRL", (0.7, 4.0, 3.9), goal, 0.4) < 1e-12


def test_cccc_residual_takes_shared_middle():
    goal = forward("LRLR", (0.3, 4.0, 4.0, 0.9), 0.6)
    assert residual("LRLR", (0.3, 4.0, 0.9), goal, 0.6) < 1e-12


def test_enumerate_families():
    small = enumerate_families(0.3)
    assert len(small) == 15 and all(len(w) <= 3 for w in small)
    big = enumerate_families(0.6)
    assert len(big) == 17 and {"LRLR", "RLRL"} <= set(big)
    assert all("GG" not in w for w in big)
    assert enumerate_families(0.5) == small


@pytest.mark.parametrize("bad", ["", "GG", "LGGR", "LRRL", "LRLRL", "X"])
def test_check_family_rejects(bad):
    with pytest.raises(ValueError):
        check_family(bad)


def test_free_index():
    assert free_index("LRLR") == (0, 1, 1, 2)
    assert free_index("LGR") == (0, 1, 2)


def test_teardrop_root():
    r = math.sqrt(3) / 2
    sols = solve_family("LRL", np.diag([1.0, -1.0, -1.0]), r)
    assert any(max(abs(a - math.pi) for a in c.angles) < 1e-6 for c in sols)


def test_cgc_absent_beyond_threshold():
    assert solve_family("LGL", np.diag([1.0, -1.0, -1.0]), 0.8) == []


def test_unknown_method():
    with pytest.raises(ValueError):
        solve_family("LRL", np.eye(3), 0.4, SolveOptions(method="bogus"))


@pytest.mark.parametrize("method", ["analytic", "grid"])
def test_recovers_forward_construction(method):
    word, angles, r = "LRL", (0.7, 4.0, 3.9), 0.4
    sols = solve_family(word, forward(word, angles, r), r, SolveOptions(method=method))
    assert any(np.allclose(c.angles, angles, atol=1e-7) for c in sols)
    for c in sols:
        assert rotation_angle_between(path_endpoint(c.path(r)).rot, forward(word, angles, r)) < 1e-9
        assert c.length == pytest.approx(word_length(c.family, c.angles, r), abs=1e-12)
    assert [c.length for c in sols] == sorted(c.length for c in sols)


def test_degenerate_root_is_reported_under_reduced_word():
    goal = forward("LR", (1.0, 2.5), 0.4)
    sols = solve_family("LRL", goal, 0.4)
    assert any(c.family == "LR" for c in sols)
    assert all(c.family in ("LRL", "LR", "RL", "L", "R") for c in sols)


def _solution_key(sols):
    return [(c.family, tuple(round(a, 7) for a in c.angles)) for c in sols]


@pytest.mark.parametrize(
    "word,angles,r",
    [("LRL", (0.7, 4.0, 3.9), 0.4), ("LGR", (1.3, 2.2, 0.4), 0.3), ("RLRL", (0.5, 4.2, 4.2, 1.1), 0.6),
     ("GR", (1.0, 2.0), 0.5)],
)
def test_grid_and_analytic_agree(word, angles, r):
    goal = forward(word, angles, r)
    a = solve_family(word, goal, r, SolveOptions(method="analytic"))
    g = solve_family(word, goal, r, SolveOptions(method="grid"))
    assert _solution_key(a) == _solution_key(g)


@needs_compiled
@pytest.mark.parametrize("word,angles,r", [("LRL", (0.7, 4.0, 3.9), 0.4), ("RGL", (2.0, 0.9, 5.0), 0.2)])
def test_compiled_kernel_matches_fallback(word, angles, r):
    goal = forward(word, angles, r)
    c = solve_family(word, goal, r, SolveOptions(method="grid", backend="compiled"))
    p = solve_family(word, goal, r, SolveOptions(method="grid", backend="python"))
    assert _solution_key(c) == _solution_key(p)


@needs_compiled
def test_compiled_kernel_raw_output_matches(rng):
    axes = np.array([[-0.6, 0, 0.8], [0.6, 0, 0.8], [-0.6, 0, 0.8]])
    goal = forward("LRL", (1.0, 4.0, 2.0), 0.8)
    starts = rng.uniform(0, 2 * math.pi, size=(200, 3))
    tc, rc = get_newton("compiled")(axes, np.arange(3), goal, starts)
    tp, rp = get_newton("python")(axes, np.arange(3), goal, starts)
    ok = (rc < 1e-10) & (rp < 1e-10)
    assert ok.mean() > 0.5
    assert np.allclose(np.mod(tc[ok], 2 * math.pi), np.mod(tp[ok], 2 * math.pi), atol=1e-6)


def test_unknown_backend():
    with pytest.raises(ValueError):
        get_newton("gpu")


def test_mirror_symmetry(rng):
    for _ in range(10):
        r = rng.uniform(0.1, 0.5)
        word = ["LRL", "RGL", "LGL", "RL"][rng.integers(4)]
        angles = rng.uniform(0.2, 2 * math.pi - 0.2, len(word))
        goal = forward(word, angles, r)
        mirrored = MIRROR @ goal @ MIRROR
        a = solve_all(goal, r)
        b = solve_all(mirrored, r)
        assert len(a) == len(b)
        assert np.allclose([c.length for c in a], [c.length for c in b], atol=1e-9)
        assert sorted((round(c.length, 6), c.family.translate(SWAP)) for c in a) == sorted(
            (round(c.length, 6), c.family) for c in b
        )


def test_soundness_and_forward_closure(rng):
    words = [w for w in FAMILIES if len(w) <= 3]
    for _ in range(100):
        word = words[rng.integers(len(words))]
        r = rng.uniform(0.05, 0.5)
        angles = rng.uniform(0.2, 2 * math.pi - 0.2, len(word))
        goal = forward(word, angles, r)
        sols = solve_family(word, goal, r)
        assert sols, (word, angles, r)
        for c in sols:
            end = path_endpoint(PathSpec.from_word(r, c.family, c.angles)).rot
            assert rotation_angle_between(end, goal) < 1e-9
        assert sols[0].length <= word_length(word, angles, r) + 1e-7


def test_env_var_forces_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SPHERE_DUBINS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import sphere_dubins; print(sphere_dubins.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
