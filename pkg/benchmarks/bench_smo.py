#!/usr/bin/env python3
"""Benchmark the compiled SMO kernel against the numpy fallback.

Times both backends on the same RBF regression problems across a range of
training-set sizes, verifies their solutions agree, and prints a table
with the per-solve time and speedup.

Usage:
    python3 benchmarks/bench_smo.py [--sizes 50,100,200,400] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from netcut.analytical import _smo_py

try:
    from netcut.analytical import _smo_core
except ImportError:
    _smo_core = None


def make_problem(n: int, seed: int):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 2.0, size=(n, 5))
    y = x[:, 0] * (1.0 + 0.2 * np.sin(3.0 * x[:, 1])) + 0.05 * x[:, 2]
    d = ((x[:, None, :] - x[None, :, :]) ** 2).sum(-1)
    k = np.exp(-0.5 * d)
    return np.ascontiguousarray(k), np.ascontiguousarray(y)


def time_solve(impl, k, y, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = impl.solve(k, y, 1e4, 0.01, 1e-4, 100_000)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="50,100,200,400")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _smo_core is None:
        print("compiled backend unavailable; timing the numpy fallback only")
    header = f"{'n':>6} {'python (ms)':>14} {'compiled (ms)':>14} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        k, y = make_problem(n, seed=n)
        t_py, r_py = time_solve(_smo_py, k, y, args.repeats)
        if _smo_core is None:
            print(f"{n:>6} {t_py * 1e3:>14.2f} {'-':>14} {'-':>9}")
            continue
        t_cy, r_cy = time_solve(_smo_core, k, y, args.repeats)
        if not np.allclose(r_py[0], r_cy[0], atol=1e-9) or abs(r_py[1] - r_cy[1]) > 1e-9:
            print(f"n={n}: BACKEND MISMATCH")
            return 1
        print(f"{n:>6} {t_py * 1e3:>14.2f} {t_cy * 1e3:>14.2f} {t_py / t_cy:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
