"""Time the compiled kernels against their numpy counterparts.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one row per kernel with the best time of each backend and the speedup.
"""
import argparse
import math
import timeit

import numpy as np

from revperim import _kernels_py

try:
    from revperim import _kernels as _compiled
except ImportError:
    _compiled = None


def cases():
    rng = np.random.default_rng(0)
    theta = np.sort(rng.uniform(0.0, 2 * math.pi, 50))
    pts, tans = _kernels_py.radial_points(theta, 1.0, [0.45], [0.0, 0.04])
    big = np.sort(rng.uniform(0.0, 2 * math.pi, 4096))
    return [
        ("radial_points n=50", "radial_points", (theta, 1.0, [0.45], [0.0, 0.04]), 2000),
        ("radial_points n=4096", "radial_points", (big, 1.0, [0.0, 0.1], []), 200),
        ("polygon_eval n=50", "polygon_eval", (pts, tans), 2000),
        ("scan_disk_grid m=4 res=2e-3", "scan_disk_grid", (3.2, 4, 2e-3, 8e-3), 3),
        ("scan_disk_grid m=5 res=1e-2", "scan_disk_grid", (4.0, 5, 1e-2, 5e-2), 3),
    ]


def best_time(fn, args, number, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _compiled is None:
        print("compiled extension not built; only the numpy timings are shown")
    print("%-30s %14s %14s %9s" % ("kernel", "numpy", "cython", "speedup"))
    for label, name, fargs, number in cases():
        t_py = best_time(getattr(_kernels_py, name), fargs, number, args.repeat)
        if _compiled is None:
            print("%-30s %12.3g s %14s %9s" % (label, t_py, "-", "-"))
            continue
        t_c = best_time(getattr(_compiled, name), fargs, number, args.repeat)
        print("%-30s %12.3g s %12.3g s %8.1fx" % (label, t_py, t_c, t_py / t_c))


if __name__ == "__main__":
    main()
