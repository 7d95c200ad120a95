#!/usr/bin/env python3
"""Benchmark the compiled elimination kernel against the pure-Python one.

Both backends run the same fraction-free reduction on identical random
integer matrices (the workload behind every rank, nullspace and pairing
computation).  Usage: python benchmarks/bench_kernel.py [--sizes 40,80,120]
"""

import argparse
import random
import time

from wonder import _kernel_py

try:
    from wonder import _kernel as _kernel_c
except ImportError:
    _kernel_c = None


def random_matrix(rnd, n, m, density=0.4, span=50):
    return [
        [rnd.randint(-span, span) if rnd.random() < density else 0 for _ in range(m)]
        for _ in range(n)
    ]


def time_backend(fn, matrices, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for rows, ncols in matrices:
            fn(rows, ncols)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="30,60,90")
    parser.add_argument("--count", type=int, default=8, help="matrices per size")
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    rnd = random.Random(args.seed)
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'size':>6} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for n in sizes:
        matrices = [(random_matrix(rnd, n, n), n) for _ in range(args.count)]
        t_py = time_backend(_kernel_py.bareiss_echelon, matrices)
        if _kernel_c is None:
            print(f"{n:>6} {t_py:>11.4f}s {'(missing)':>12} {'-':>9}")
            continue
        t_c = time_backend(_kernel_c.bareiss_echelon, matrices)
        for rows, ncols in matrices:
            assert _kernel_c.bareiss_echelon(rows, ncols) == _kernel_py.bareiss_echelon(
                rows, ncols
            )
        print(f"{n:>6} {t_py:>11.4f}s {t_c:>11.4f}s {t_py / t_c:>8.2f}x")


if __name__ == "__main__":
    main()
