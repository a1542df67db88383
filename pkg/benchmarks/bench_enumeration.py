#!/usr/bin/env python3
"""Compare the compiled enumeration kernel against the pure-Python fallback.

Runs the same Gaussian-sum workload through both builds of the kernel and
reports wall times plus agreement of the results.  Usage:

    python3 benchmarks/bench_enumeration.py [--dims 2 3 4] [--repeats 3]
"""

from __future__ import annotations

import argparse
import random
import time

from alk import _fpenum_py

try:
    from alk import _fpenum
except ImportError:
    _fpenum = None


def random_gram(rng, n):
    """A^T A + I for a random integer A: symmetric positive definite."""
    a = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    return [[sum(a[k][i] * a[k][j] for k in range(n)) + (i == j)
             for j in range(n)] for i in range(n)]


def workload(kernel, grams, radius_sq, budget):
    out = []
    for g in grams:
        total, count = kernel.gauss_sum(g, radius_sq, budget)
        out.append((total, count))
    return out


def bench(kernel, grams, radius_sq, budget, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = workload(kernel, grams, radius_sq, budget)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--per-dim", type=int, default=8)
    ap.add_argument("--radius", type=float, default=6.0)
    ap.add_argument("--budget", type=int, default=50_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _fpenum is None:
        print("compiled kernel not available; only the fallback was timed")

    rng = random.Random(args.seed)
    radius_sq = args.radius * args.radius
    print(f"{'dim':>3}  {'python (s)':>12}  {'cython (s)':>12}  {'speedup':>8}")
    for n in args.dims:
        grams = [[[float(x) for x in row] for row in random_gram(rng, n)]
                 for _ in range(args.per_dim)]
        t_py, r_py = bench(_fpenum_py, grams, radius_sq, args.budget,
                           args.repeats)
        if _fpenum is None:
            print(f"{n:>3}  {t_py:>12.4f}  {'-':>12}  {'-':>8}")
            continue
        t_cy, r_cy = bench(_fpenum, grams, radius_sq, args.budget,
                           args.repeats)
        for (a, ca), (b, cb) in zip(r_py, r_cy):
            assert ca == cb, "kernels visited different lattice points"
            assert abs(a - b) <= 1e-9 * max(1.0, abs(a)), "sums disagree"
        print(f"{n:>3}  {t_py:>12.4f}  {t_cy:>12.4f}  {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
