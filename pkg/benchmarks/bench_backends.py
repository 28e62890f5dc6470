"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_backends.py --sizes 200 500 1000

Also times one end-to-end ``cluster`` run per backend on the
three-circles dataset.
"""
import argparse
import time

import numpy as np

from heatclust import _accel, _fallback
from heatclust.geometry import PointCloud, generate_three_circles
from heatclust.spectral import ClusterConfig, cluster

try:
    from heatclust import _core
except ImportError:
    _core = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernels(n, repeat):
    rng = np.random.default_rng(0)
    x = generate_three_circles(n, 0.05, seed=0).cloud.coords
    d = _fallback.pairwise_distances(x)
    r = 0.25
    psi = rng.normal(size=(8, n))
    cases = {
        "pairwise_distances": lambda m: m.pairwise_distances(x),
        "neighbor_counts": lambda m: m.neighbor_counts(d, r),
        "radius_components": lambda m: m.radius_components(d, 3.0),
        "pivoted_elimination": lambda m: m.pivoted_elimination(psi, 1e-12),
    }
    rows = []
    for name, call in cases.items():
        py = best_of(lambda: call(_fallback), repeat)
        cy = best_of(lambda: call(_core), repeat) if _core else float("nan")
        rows.append((name, n, py, cy))
    return rows


def end_to_end(n, grid):
    data = generate_three_circles(n, 0.05, seed=0)
    config = ClusterConfig(grid=grid, seed=0)
    out = {}
    for label, impl in (("python", _fallback), ("cython", _core)):
        if impl is None:
            continue
        for name in ("pairwise_distances", "neighbor_counts", "radius_components",
                     "pivoted_elimination"):
            setattr(_accel, name, getattr(impl, name))
        t0 = time.perf_counter()
        res = cluster(PointCloud(data.cloud.coords), config)
        out[label] = (time.perf_counter() - t0, res.beta0, res.timings)
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[200, 500, 1000])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--e2e-n", type=int, default=300)
    p.add_argument("--e2e-grid", type=int, default=10)
    args = p.parse_args()

    print(f"{'kernel':<22}{'n':>6}{'python [s]':>14}{'cython [s]':>14}{'speedup':>10}")
    for n in args.sizes:
        for name, size, py, cy in kernels(n, args.repeat):
            print(f"{name:<22}{size:>6}{py:>14.5f}{cy:>14.5f}{py / cy:>10.1f}")
    print()
    print(f"end-to-end cluster, three-circles n={args.e2e_n}, grid={args.e2e_grid}")
    for label, (wall, beta0, timings) in end_to_end(args.e2e_n, args.e2e_grid).items():
        parts = ", ".join(f"{k}={v:.3f}s" for k, v in timings.items())
        print(f"  {label:<8}{wall:8.3f}s  beta0={beta0}  ({parts})")


if __name__ == "__main__":
    main()
