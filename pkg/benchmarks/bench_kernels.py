"""Compiled kernels against the numpy fallback, and fast against slow apply_C.

Run with ``python3 benchmarks/bench_kernels.py [--sizes 256 512 1024]``.
"""

import argparse
import time

import numpy as np

from bimult import kernels
from bimult.catalog import make_symbol
from bimult.core import Grid1D
from bimult.operators import apply_C
from bimult.verification import gaussian_pair


def best_of(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_antidiagonal(n, repeats):
    rng = np.random.default_rng(0)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    row = {"kernel": "antidiagonal_sums", "n": n}
    for backend in ("python", "compiled"):
        if backend == "compiled" and not kernels.COMPILED_AVAILABLE:
            continue
        row[backend] = best_of(lambda: kernels.antidiagonal_sums(x, y, w, backend=backend), repeats)
    return row


def bench_apply(symbol, N, repeats):
    psi = make_symbol(symbol)
    grid = Grid1D(8, N)
    f, g = gaussian_pair(grid)
    apply_C(psi, f, g)
    row = {"symbol": symbol, "N": N}
    for backend in ("python", "compiled"):
        if backend == "compiled" and not kernels.COMPILED_AVAILABLE:
            continue
        row[f"fast[{backend}]"] = best_of(lambda: apply_C(psi, f, g, backend=backend), repeats)
        row[f"slow[{backend}]"] = best_of(lambda: apply_C(psi, f, g, method="slow", backend=backend), 1)
    return row


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024])
    parser.add_argument("--symbols", nargs="+", default=["bht", "tent", "one"])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    print(f"threads={kernels.num_threads()} compiled={kernels.COMPILED_AVAILABLE}")
    for n in args.sizes:
        row = bench_antidiagonal(n, args.repeats)
        print("  ".join(f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}" for k, v in row.items()))
    for sym in args.symbols:
        for n in args.sizes:
            row = bench_apply(sym, n, args.repeats)
            print("  ".join(f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}" for k, v in row.items()))


if __name__ == "__main__":
    main()
