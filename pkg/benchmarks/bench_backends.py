"""Timing comparison of the compiled and pure-Python kernel backends.

Runs the three hot kernels (pairwise squared distances, cross squared
distances, exponential-kernel application) at a few problem sizes and prints
per-call timings plus the speedup of the compiled extension over the numpy
fallback.  Usage:

    python benchmarks/bench_backends.py [--repeats 5]
"""

import argparse
import timeit

import numpy as np

from frlsc import _kernels_py
from frlsc.function_space import Grid

try:
    from frlsc import _kernels_c
except ImportError:
    _kernels_c = None


SIZES = [
    # (n, p, m) for the distance kernels; m reused for the operator kernel
    (32, 2, 64),
    (128, 3, 128),
    (256, 3, 256),
]


def bench_case(impl, n, p, m, repeats):
    rng = np.random.default_rng(0)
    X = rng.standard_normal((n, p, m))
    Y = rng.standard_normal((n // 2, p, m))
    grid = Grid.uniform(m)
    curves = rng.standard_normal((n, m))
    out = {}
    for name, call in [
        ("pairwise_sqdist", lambda: impl.pairwise_sqdist(X, grid.weights)),
        ("cross_sqdist", lambda: impl.cross_sqdist(X, Y, grid.weights)),
        ("apply_exp_kernel",
         lambda: impl.apply_exp_kernel(grid.points, grid.weights, curves)),
    ]:
        call()  # warm up
        out[name] = min(timeit.repeat(call, number=1, repeat=repeats))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats per case (best is reported)")
    args = parser.parse_args()

    if _kernels_c is None:
        print("compiled backend not built; timing the python backend only")

    header = f"{'case':>18} {'kernel':>18} {'python':>10}"
    if _kernels_c is not None:
        header += f" {'compiled':>10} {'speedup':>8}"
    print(header)

    for n, p, m in SIZES:
        py = bench_case(_kernels_py, n, p, m, args.repeats)
        cc = bench_case(_kernels_c, n, p, m, args.repeats) if _kernels_c else None
        for kernel in py:
            line = f"{f'n={n},p={p},m={m}':>18} {kernel:>18} {py[kernel]:>9.2e}s"
            if cc is not None:
                line += f" {cc[kernel]:>9.2e}s {py[kernel] / cc[kernel]:>7.2f}x"
            print(line)

    if _kernels_c is not None:
        # cross-check: both backends must agree to round-off
        rng = np.random.default_rng(1)
        X = rng.standard_normal((16, 2, 33))
        w = Grid.uniform(33).weights
        np.testing.assert_allclose(
            _kernels_c.pairwise_sqdist(X, w),
            _kernels_py.pairwise_sqdist(X, w),
            rtol=1e-12,
        )
        print("\nbackends agree to round-off on a spot check")


if __name__ == "__main__":
    main()
