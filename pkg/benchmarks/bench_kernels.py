"""Benchmark the compiled BFS kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--size N] [--repeats K]

Times distance_field on random quad and hex grids at 20% obstacles and
prints the per-call mean for each implementation plus the speedup.  Also
cross-checks that both produce identical fields on every instance.
"""
import argparse
import time

import numpy as np

from hexplore import _pykernels


def bench(fn, grids, starts, hex_grid, repeats):
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        fields = [
            fn(g, r, c, hex_grid) for g, (r, c) in zip(grids, starts)
        ]
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best / len(grids), fields


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=120)
    ap.add_argument("--grids", type=int, default=20)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    try:
        from hexplore import _ckernels
    except ImportError:
        _ckernels = None
        print("compiled kernel not built; timing the fallback only")

    rng = np.random.default_rng(0)
    grids = []
    starts = []
    for _ in range(args.grids):
        g = (rng.random((args.size, args.size)) < 0.2).astype(np.uint8)
        free = np.argwhere(g == 0)
        r, c = free[rng.integers(len(free))]
        grids.append(g)
        starts.append((int(r), int(c)))

    for hex_grid in (0, 1):
        label = "hex" if hex_grid else "quad"
        t_py, f_py = bench(
            _pykernels.distance_field, grids, starts, hex_grid, args.repeats
        )
        print(f"{label:4s} pure-python: {t_py * 1e3:8.3f} ms/field")
        if _ckernels is not None:
            t_c, f_c = bench(
                _ckernels.distance_field, grids, starts, hex_grid, args.repeats
            )
            match = all(np.array_equal(a, b) for a, b in zip(f_py, f_c))
            print(f"{label:4s} compiled:    {t_c * 1e3:8.3f} ms/field "
                  f"(x{t_py / t_c:.1f}, outputs identical: {match})")
            if not match:
                raise SystemExit("kernel outputs diverge")


if __name__ == "__main__":
    main()
