"""Time the numba kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Both paths must agree
exactly; the script stops if they do not.
"""

import argparse
import time

import numpy as np

from overpartlab import _kernels
from overpartlab.combinatorics import ClassSpec, ClassTag, _rules


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(N):
    spec = ClassSpec(ClassTag.U, 4, 12, 6)
    allowed, cap, w = _rules(spec, N)
    a = np.random.default_rng(0).integers(-9, 10, size=(N // 2, N + 1))
    b = np.random.default_rng(1).integers(-9, 10, size=(N // 2, N + 1))
    return {
        "count_table U(4, 12, 6)": lambda: _kernels.count_table(allowed, N, cap, w),
        "conv2d random": lambda: _kernels.conv2d(a, b, N + 1),
        "divide_binomial": lambda: _kernels.divide_binomial(a, 1, 1, 1, N + 1)[0],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--weight", type=int, default=40)
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return
    print(f"{'kernel':28} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for name, fn in cases(args.weight).items():
        _kernels.set_jit(True)
        fn()  # compile outside the timing
        tj, rj = _time(fn, args.reps)
        _kernels.set_jit(False)
        tn, rn = _time(fn, args.reps)
        _kernels.set_jit(True)
        if not np.array_equal(np.asarray(rj, dtype=object), np.asarray(rn, dtype=object)):
            raise SystemExit(f"{name}: numba and numpy results differ")
        print(f"{name:28} {tj:10.4f} {tn:10.4f} {tn / tj:8.1f}x")


if __name__ == "__main__":
    main()
