"""Time the compiled kernels against the pure-numpy fallback.

Both paths live in zetaladder._kernels; the compiled one is selected at
import time unless ZETALADDER_NO_NUMBA is set.  Here we reach the fallback
functions directly (they exist either way), so a single process can time
both sides on identical inputs.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --sizes 1000,10000 --repeats 7

Typical output (one warm-up call excluded per case; numbers are medians):

    kernel                     n        numba      numpy     speedup
    z_rs_many              1 000      1.9 ms     48.5 ms       25.0x
    ...
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from zetaladder import _kernels


def _median_time(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def bench_z_many(n: int, repeats: int) -> tuple[float, float]:
    ts = np.linspace(200.0, 5000.0, n)
    if _kernels.HAS_NUMBA:
        out = np.empty_like(ts)
        fast = lambda: _kernels._z_rs_fill(ts, 4, out)  # noqa: E731
    else:
        fast = lambda: _kernels.z_rs_many(ts, 4)  # noqa: E731
    slow = lambda: _kernels._z_rs_many_np(ts, 4)  # noqa: E731
    fast()  # warm-up (JIT compile on the first call)
    slow()
    return _median_time(fast, repeats), _median_time(slow, repeats)


def bench_zsq_integral(width: float, repeats: int) -> tuple[float, float]:
    a, b = 1000.0, 1000.0 + width
    args = (a, b, 1e-10, 1.0, 4)
    if _kernels.HAS_NUMBA:
        fast = lambda: _kernels._zsq_adaptive(*args)  # noqa: E731
    else:
        fast = lambda: _kernels._zsq_adaptive_np(*args)  # noqa: E731
    slow = lambda: _kernels._zsq_adaptive_np(*args)  # noqa: E731
    fast()
    slow()
    return _median_time(fast, repeats), _median_time(slow, repeats)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000",
                    help="comma list of array lengths for the Z benchmark")
    ap.add_argument("--widths", default="5,25",
                    help="comma list of interval widths for the Z^2 integral")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    if not _kernels.HAS_NUMBA:
        print("note: numba is inactive in this process (ZETALADDER_NO_NUMBA "
              "set or import failed); the 'numba' column repeats the "
              "fallback.\n")

    rows = []
    for n in (int(s) for s in args.sizes.split(",")):
        fast, slow = bench_z_many(n, args.repeats)
        rows.append((f"z_rs_many", f"n={n}", fast, slow))
    for w in (float(s) for s in args.widths.split(",")):
        fast, slow = bench_zsq_integral(w, args.repeats)
        rows.append((f"zsq_integral_rs", f"w={w:g}", fast, slow))

    print(f"{'kernel':<18} {'case':>10} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for name, case, fast, slow in rows:
        print(f"{name:<18} {case:>10} {fast * 1e3:>10.2f}ms {slow * 1e3:>10.2f}ms "
              f"{slow / fast:>8.1f}x")


if __name__ == "__main__":
    main()
