"""Compare the numba and numpy annulus kernels, alone and inside a full search.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import os
import time

import numpy as np

from quadegypt import _kernels
from quadegypt.oracle import brute_force
from quadegypt.ring import make_ring

CASES = [
    # (d, P, Q, lo, hi)
    (-1, (3, 1), (10, 20), 1, 20_000),
    (-7, (1, -1), (40, 17), 1, 50_000),
    (-11, (1, 1), (60, 24), 1, 200_000),
]

SEARCHES = [(-1, (23, 14)), (-7, (31, -9)), (-11, (17, 6))]


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def bench_kernels(repeat):
    print(f"{'case':<42}{'numba':>10}{'numpy':>10}  hits  agree")
    for d, P, Q, lo, hi in CASES:
        p, q = make_ring(d).omega_sq_coeffs
        _kernels.solve_annulus_numba(P, Q, p, q, lo, 10)  # compile outside the timing
        tn, a = _best(lambda: _kernels.solve_annulus_numba(P, Q, p, q, lo, hi), repeat)
        tp, b = _best(lambda: _kernels.solve_annulus_numpy(P, Q, p, q, lo, hi), repeat)
        key = lambda arrs: sorted(zip(*(x.tolist() for x in arrs)))
        agree = key(a) == key(b)
        print(f"d={d} P={P} Q={Q} hi={hi:<8}".ljust(42) + f"{tn * 1e3:>8.2f}ms{tp * 1e3:>8.2f}ms  {len(a[0]):>4}  {agree}")


def bench_search(repeat):
    print(f"\n{'3-term search':<42}{'numba':>10}{'numpy':>10}  sols")
    saved = os.environ.get("QUADEGYPT_NUMBA")
    try:
        for d, n in SEARCHES:
            ring = make_ring(d)
            x = ring(*n)
            bound = 4 * x.norm() ** 2
            os.environ["QUADEGYPT_NUMBA"] = "1"
            tn, a = _best(lambda: brute_force(ring, x, 3, bound, cap=None), repeat)
            os.environ["QUADEGYPT_NUMBA"] = "0"
            tp, b = _best(lambda: brute_force(ring, x, 3, bound, cap=None), repeat)
            assert [str(s) for s in a] == [str(s) for s in b]
            print(f"d={d} n={x} bound={bound}".ljust(42) + f"{tn:>9.3f}s{tp:>9.3f}s  {len(a)}")
    finally:
        if saved is None:
            os.environ.pop("QUADEGYPT_NUMBA", None)
        else:
            os.environ["QUADEGYPT_NUMBA"] = saved


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"numba available: {_kernels.HAVE_NUMBA}; numpy {np.__version__}\n")
    bench_kernels(args.repeat)
    bench_search(args.repeat)


if __name__ == "__main__":
    main()
