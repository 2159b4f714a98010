"""Compare the compiled and numpy multi-start Newton kernels.

    python benchmarks/bench_grid_newton.py [--repeat N] [--grid-pts K]

Times the raw kernel on a full start grid and a whole ``solve_family`` call
in grid mode, for a few families and radii.
"""

import argparse
import math
import time
from itertools import product

import numpy as np

from sphere_dubins.kernels import compiled_available, get_newton
from sphere_dubins.model import segment_generator, word_endpoint
from sphere_dubins.solver import SolveOptions, free_index, solve_family

CASES = [("LRL", 0.4, (0.7, 4.0, 3.9)), ("LGR", 0.3, (1.1, 2.0, 0.5)), ("RLRL", 0.6, (0.4, 4.0, 4.0, 1.2))]


def _best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--grid-pts", type=int, default=16)
    args = ap.parse_args()
    backends = ["python"] + (["compiled"] if compiled_available() else [])
    if len(backends) == 1:
        print("compiled kernel not built; timing the numpy fallback only")

    print(f"{'family':8s}{'backend':10s}{'kernel s':>10s}{'solve s':>10s}{'roots':>7s}")
    for word, r, angles in CASES:
        goal = word_endpoint(word, angles, r)
        axes = np.array([segment_generator(d, r)[0] for d in word])
        k = len(set(free_index(word)))
        ticks = (np.arange(args.grid_pts) + 0.5) * (2.0 * math.pi / args.grid_pts)
        starts = np.array(list(product(ticks, repeat=k)))
        timings = {}
        for backend in backends:
            newton = get_newton(backend)
            opts = SolveOptions(method="grid", grid_pts=args.grid_pts, backend=backend)
            t_kernel = _best_of(lambda: newton(axes, np.array(free_index(word)), goal, starts, 60, 1e-7, 1e-12),
                                args.repeat)
            t_solve = _best_of(lambda: solve_family(word, goal, r, opts), args.repeat)
            roots = len(solve_family(word, goal, r, opts))
            timings[backend] = t_kernel
            print(f"{word:8s}{backend:10s}{t_kernel:10.4f}{t_solve:10.4f}{roots:7d}")
        if "compiled" in timings:
            print(f"{'':8s}kernel speedup {timings['python'] / timings['compiled']:.1f}x")


if __name__ == "__main__":
    main()
