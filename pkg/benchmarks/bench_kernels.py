"""Compare the compiled bitset kernels against the pure-Python
fallbacks on the two hot paths: cut enumeration (NextClosure) and the
exhaustive directed-subset scan.

Run:  python3 benchmarks/bench_kernels.py [--sizes 12 16 18] [--repeat 3]

The fallback numbers are what you get with ORDERTOP_NO_NUMBA=1; the
first jit call includes compilation and is reported separately.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ordertop import _kernels
from ordertop.poset import random_poset


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[12, 16, 18, 20])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--density", type=float, default=0.3)
    args = ap.parse_args()

    print(f"numba active: {_kernels.USING_NUMBA}")
    header = f"{'n':>4} {'kernel':>22} {'jit (s)':>10} {'python (s)':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for n in args.sizes:
        p = random_poset(n, density=args.density, seed=n)
        up = np.array(p._up, dtype=np.uint64)
        down = np.array(p._down, dtype=np.uint64)

        if _kernels.USING_NUMBA:
            t0 = time.perf_counter()
            _kernels._cuts_jit(up, down, n, 1 << 22)
            warm = time.perf_counter() - t0
            if n == args.sizes[0]:
                print(f"(first jit call, with compilation: {warm:.2f}s)")
            jit_t = _time(lambda: _kernels._cuts_jit(up, down, n, 1 << 22), args.repeat)
        else:
            jit_t = float("nan")
        py_t = _time(
            lambda: _kernels.enumerate_cut_masks_py(p._up, p._down, n, 1 << 22),
            args.repeat,
        )
        ratio = py_t / jit_t if jit_t == jit_t and jit_t > 0 else float("nan")
        print(f"{n:>4} {'cut enumeration':>22} {jit_t:>10.4f} {py_t:>12.4f} {ratio:>7.1f}x")

        if n <= 20:
            top = p.n - 1
            if _kernels.USING_NUMBA:
                _kernels._scan_jit(up, down, n, top)
                jit_t = _time(lambda: _kernels._scan_jit(up, down, n, top), args.repeat)
            else:
                jit_t = float("nan")
            py_t = _time(
                lambda: _kernels.directed_subset_scan_py(p._up, p._down, n, top),
                args.repeat,
            )
            ratio = py_t / jit_t if jit_t == jit_t and jit_t > 0 else float("nan")
            print(f"{n:>4} {'directed-subset scan':>22} {jit_t:>10.4f} {py_t:>12.4f} {ratio:>7.1f}x")


if __name__ == "__main__":
    main()
