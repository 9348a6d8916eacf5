"""Benchmark the compiled quadrature kernel against the numpy fallback.

Times a representative grid workload (three scenes, several scales, a
shear sweep) through both kernels and prints cells/second plus the
speedup.  Run from the repository root:

    python3 benchmarks/bench_backends.py [--cells N]
"""

import argparse
import math
import time

import numpy as np

from taylorlets import (
    BACKEND,
    CosineCurve,
    PolynomialCurve,
    QuadratureConfig,
    build_taylorlet,
    graph_jump_scene,
    unit_ball_scene,
)
from taylorlets import _backend
from taylorlets.transform import build_plans


def workload(spec, n_shears):
    """(plans, a, sfact, window) tuples covering the three curve kinds."""
    cfg = QuadratureConfig()
    scenes = [
        graph_jump_scene(PolynomialCurve((0.0, 0.0, 1.0)), j=1, sign=1),
        graph_jump_scene(CosineCurve(1.0, 1.0, 0.0), j=1, sign=1),
        unit_ball_scene(),
    ]
    centers = [(0.0, 0.0, 2.0), (1.0, 0.0, -1.0), (-1.0, 0.0, 1.0)]
    cells = []
    for scene, center in zip(scenes, centers):
        plans = build_plans(scene, spec)
        for i in range(4, 11):
            a = 2.0 ** -i
            half = math.sqrt(math.log(1.0 / cfg.window_eps)) * a ** 0.4
            for shear in np.linspace(center[2] - 1.0, center[2] + 1.0, n_shears):
                s = (center[0], center[1], float(shear))
                sfact = np.array([s[0], s[1], s[2] / 2.0])
                for coeffs, kind, params, _w, _j, domain in plans:
                    lo = max(-half, domain[0])
                    hi = min(half, domain[1])
                    cells.append((coeffs, kind, params, a, a ** -0.4, 0.0,
                                  sfact, lo, hi, cfg.rel_tol, cfg.abs_tol,
                                  cfg.max_subdivisions))
    return cells


def run(kernel, cells, repeats=1):
    best = math.inf
    checksum = 0.0
    for _ in range(repeats):
        t0 = time.perf_counter()
        acc = 0.0
        for args in cells:
            value, _err, _ok = kernel(*args)
            acc += value
        best = min(best, time.perf_counter() - t0)
        checksum = acc
    return best, checksum


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--shears", type=int, default=40,
                    help="shear samples per scene/scale (default 40)")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    spec = build_taylorlet(2, 2)
    cells = workload(spec, args.shears)
    print(f"selected backend: {BACKEND}; workload: {len(cells)} quadrature cells")

    t_py, sum_py = run(_backend.fallback_term_integral, cells, args.repeats)
    print(f"python fallback: {t_py:.3f}s  ({len(cells) / t_py:,.0f} cells/s)")

    if BACKEND == "compiled":
        t_c, sum_c = run(_backend.term_integral, cells, args.repeats)
        print(f"compiled kernel: {t_c:.3f}s  ({len(cells) / t_c:,.0f} cells/s)")
        rel = abs(sum_c - sum_py) / max(abs(sum_py), 1e-300)
        print(f"speedup: {t_py / t_c:.1f}x   checksum rel diff: {rel:.2e}")
    else:
        print("compiled kernel not built; install with the Cython extension "
              "to compare")


if __name__ == "__main__":
    main()
