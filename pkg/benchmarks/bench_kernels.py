"""Compare the compiled kernels with the numpy/pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best wall time over ``--repeat`` runs and checks that
both backends return identical arrays.
"""

import argparse
import time

import numpy as np

from receptron import _fallback
from receptron.boolexpr import npn_maps

try:
    from receptron import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(rng):
    X = rng.uniform(-5, 5, size=(1_000_000, 8))
    axes = np.arange(8)
    centers = rng.uniform(-2, 2, size=8)
    widths = rng.uniform(1, 4, size=8)
    yield ("rect_complement_sum 1e6 x 8", "rect_complement_sum",
           (X, axes, centers, widths))

    m, n = 5, 4
    Xm = rng.uniform(-5, 5, size=(500_000, n * m))
    yield (f"min_violations 5e5, m={m} n={n}", "min_violations",
           (Xm, rng.uniform(-2, 2, size=(m, n)), rng.uniform(1, 4, size=(m, n))))

    yield ("orbit_labels n=4 (65536 tables)", "orbit_labels", (npn_maps(4),))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if _kernels is None:
        print("compiled extension not built; only the fallback can be timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<36}{'cython s':>10}{'python s':>10}{'speedup':>9}  same")
    for label, name, fargs in cases(rng):
        t_py, out_py = best_of(lambda: getattr(_fallback, name)(*fargs), args.repeat)
        if _kernels is None:
            print(f"{label:<36}{'-':>10}{t_py:>10.4f}{'-':>9}  -")
            continue
        t_cy, out_cy = best_of(lambda: getattr(_kernels, name)(*fargs), args.repeat)
        same = np.array_equal(np.asarray(out_cy), np.asarray(out_py))
        print(f"{label:<36}{t_cy:>10.4f}{t_py:>10.4f}{t_py / t_cy:>8.1f}x  {same}")


if __name__ == "__main__":
    main()
