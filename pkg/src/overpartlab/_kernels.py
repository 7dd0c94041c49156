"""Hot loops for series arithmetic and class counting.

Each kernel has a numba version and a plain numpy version.  The numba
version only handles int64 arrays; callers fall back to the numpy path with
object (Python int) arrays whenever a coefficient bound could leave the
int64 range.  Set ``OVERPARTLAB_NO_JIT=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False

# Coefficient magnitudes at or above this switch arithmetic to Python ints.
INT_LIMIT = 2**62

_jit = HAVE_NUMBA and os.environ.get("OVERPARTLAB_NO_JIT", "") not in ("1", "true", "yes")


def jit_enabled() -> bool:
    return _jit


def set_jit(enabled: bool) -> None:
    """Switch between the numba and numpy kernels at runtime (used by the benchmark)."""
    global _jit
    _jit = bool(enabled) and HAVE_NUMBA


def _fits(bound) -> bool:
    return bound < INT_LIMIT


def max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(v)) for v in arr.flat)
    return int(np.max(np.abs(arr)))


# ---------------------------------------------------------------------------
# truncated 2-D convolution


def _conv_np(a, b, ncols):
    dtype = object if (a.dtype == object or b.dtype == object) else np.int64
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    bx, bq = b.shape
    out = np.zeros((a.shape[0] + bx - 1, ncols), dtype=dtype)
    if dtype == object:
        out[...] = 0
    ii, jj = np.nonzero(a[:, :ncols])
    for i, j in zip(ii.tolist(), jj.tolist()):
        lim = min(bq, ncols - j)
        out[i:i + bx, j:j + lim] += a[i, j] * b[:, :lim]
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _conv_nb(a, b, ncols):
        ax, aq = a.shape
        bx, bq = b.shape
        out = np.zeros((ax + bx - 1, ncols), np.int64)
        for i in range(ax):
            for j in range(min(aq, ncols)):
                v = a[i, j]
                if v == 0:
                    continue
                lim = min(bq, ncols - j)
                for k in range(bx):
                    for l in range(lim):
                        out[i + k, j + l] += v * b[k, l]
        return out


def conv2d(a: np.ndarray, b: np.ndarray, ncols: int) -> np.ndarray:
    """Full 2-D convolution of ``a`` and ``b`` keeping only the first ``ncols`` columns."""
    bound = max_abs(a) * max_abs(b) * max(1, min(np.count_nonzero(a), np.count_nonzero(b)))
    small = _fits(bound)
    if small and a.dtype != object and b.dtype != object and _jit:
        return _conv_nb(a, b, ncols)
    if small:
        return _conv_np(a.astype(np.int64), b.astype(np.int64), ncols)
    return _conv_np(a.astype(object), b.astype(object), ncols)


# ---------------------------------------------------------------------------
# division by a binomial 1 - c x^i q^j with j >= 1


def _div_rows(i, j, ncols):
    steps = (ncols - 1) // j
    return steps, abs(i) * steps


def _div_np(s, c, i, j, ncols):
    steps, extra = _div_rows(i, j, ncols)
    rows = s.shape[0]
    out = np.zeros((rows + extra, ncols), dtype=s.dtype)
    if s.dtype == object:
        out[...] = 0
    off = extra if i < 0 else 0
    w = min(s.shape[1], ncols)
    out[off:off + rows, :w] = s[:, :w]
    total = rows + extra
    for col in range(j, ncols):
        src = out[:, col - j]
        if i >= 0:
            out[i:, col] += c * src[:total - i]
        else:
            out[:total + i, col] += c * src[-i:]
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _div_nb(s, c, i, j, ncols):
        steps = (ncols - 1) // j
        extra = abs(i) * steps
        rows = s.shape[0]
        total = rows + extra
        out = np.zeros((total, ncols), np.int64)
        off = extra if i < 0 else 0
        w = min(s.shape[1], ncols)
        for r in range(rows):
            for col in range(w):
                out[off + r, col] = s[r, col]
        for col in range(j, ncols):
            for r in range(total):
                src = r - i
                if 0 <= src < total:
                    out[r, col] += c * out[src, col - j]
        return out


def divide_binomial(s: np.ndarray, c: int, i: int, j: int, ncols: int):
    """Multiply ``s`` by the geometric series of ``c x^i q^j``.

    Returns ``(array, row_offset)`` where ``row_offset`` is how far the x
    origin moved down (nonzero only when ``i < 0``).
    """
    steps, extra = _div_rows(i, j, ncols)
    bound = max_abs(s) * (steps + 1)
    off = extra if i < 0 else 0
    if _fits(bound) and s.dtype != object and _jit:
        return _div_nb(s, c, i, j, ncols), off
    if _fits(bound):
        return _div_np(s.astype(np.int64), c, i, j, ncols), off
    return _div_np(s.astype(object), c, i, j, ncols), off


# ---------------------------------------------------------------------------
# counting tables for frequency-defined classes
#
# allowed[l, f, fb] says whether part value l may occur f times plain and fb
# times overlined.  The pair rule, when present, is
#     f_l + fb_l + f_{l+1} <= cap + w * fb_{l+1}
# for every l >= 1, including the largest part against an all-zero successor.
# The output table is indexed [m, n] (number of parts, weight).


def _local_np(allowed, N, dtype):
    F = allowed.shape[1] - 1
    dp = np.zeros((N + 1, N + 1), dtype=dtype)
    if dtype == object:
        dp[...] = 0
    dp[0, 0] = 1
    for l in range(1, N + 1):
        new = np.zeros_like(dp)
        if dtype == object:
            new[...] = 0
        for fb in range(2):
            for f in range(F + 1):
                cnt = f + fb
                if l * cnt > N:
                    break
                if not allowed[l, f, fb]:
                    continue
                new[cnt:, l * cnt:] += dp[:N + 1 - cnt, :N + 1 - l * cnt]
        dp = new
    return dp


def _pair_np(allowed, cap, w, N, dtype):
    F = allowed.shape[1] - 1
    zero = np.zeros((N + 1, N + 1), dtype=dtype)
    if dtype == object:
        zero[...] = 0
    dp = {}
    start = zero.copy()
    start[0, 0] = 1
    dp[(0, 0)] = start
    for l in range(1, N + 1):
        new = {}
        for (pf, pfb), src in dp.items():
            for fb in range(2):
                for f in range(F + 1):
                    cnt = f + fb
                    if l * cnt > N:
                        break
                    if not allowed[l, f, fb]:
                        continue
                    if l > 1 and pf + pfb + f > cap + w * fb:
                        continue
                    tgt = new.get((f, fb))
                    if tgt is None:
                        tgt = zero.copy()
                        new[(f, fb)] = tgt
                    tgt[cnt:, l * cnt:] += src[:N + 1 - cnt, :N + 1 - l * cnt]
        dp = new
    out = zero.copy()
    for (pf, pfb), tab in dp.items():
        if pf + pfb <= cap:
            out += tab
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _local_nb(allowed, N):
        F = allowed.shape[1] - 1
        dp = np.zeros((N + 1, N + 1), np.int64)
        dp[0, 0] = 1
        for l in range(1, N + 1):
            new = np.zeros((N + 1, N + 1), np.int64)
            for fb in range(2):
                for f in range(F + 1):
                    cnt = f + fb
                    if l * cnt > N:
                        break
                    if not allowed[l, f, fb]:
                        continue
                    for m in range(N + 1 - cnt):
                        for n in range(N + 1 - l * cnt):
                            v = dp[m, n]
                            if v != 0:
                                new[m + cnt, n + l * cnt] += v
            dp = new
        return dp

    @njit(cache=True)
    def _pair_nb(allowed, cap, w, N):
        F = allowed.shape[1] - 1
        dp = np.zeros((F + 1, 2, N + 1, N + 1), np.int64)
        live = np.zeros((F + 1, 2), np.bool_)
        dp[0, 0, 0, 0] = 1
        live[0, 0] = True
        for l in range(1, N + 1):
            new = np.zeros((F + 1, 2, N + 1, N + 1), np.int64)
            nlive = np.zeros((F + 1, 2), np.bool_)
            for pf in range(F + 1):
                for pfb in range(2):
                    if not live[pf, pfb]:
                        continue
                    for fb in range(2):
                        for f in range(F + 1):
                            cnt = f + fb
                            if l * cnt > N:
                                break
                            if not allowed[l, f, fb]:
                                continue
                            if l > 1 and pf + pfb + f > cap + w * fb:
                                continue
                            nlive[f, fb] = True
                            for m in range(N + 1 - cnt):
                                for n in range(N + 1 - l * cnt):
                                    v = dp[pf, pfb, m, n]
                                    if v != 0:
                                        new[f, fb, m + cnt, n + l * cnt] += v
            dp = new
            live = nlive
        out = np.zeros((N + 1, N + 1), np.int64)
        for pf in range(F + 1):
            for pfb in range(2):
                if live[pf, pfb] and pf + pfb <= cap:
                    out += dp[pf, pfb]
        return out


# Overpartition counts of weight n stay below 2**62 comfortably up to here.
_COUNT_INT64_MAX_WEIGHT = 200


def count_table(allowed: np.ndarray, N: int, cap: int | None = None, w: int = 0) -> np.ndarray:
    """Table ``T[m, n]`` of objects with m parts and weight n (n <= N).

    ``cap=None`` means the class has only part-local rules.
    """
    allowed = np.ascontiguousarray(allowed, dtype=np.bool_)
    small = N <= _COUNT_INT64_MAX_WEIGHT
    if cap is None:
        if small and _jit:
            return _local_nb(allowed, N)
        return _local_np(allowed, N, np.int64 if small else object)
    if small and _jit:
        return _pair_nb(allowed, int(cap), int(w), N)
    return _pair_np(allowed, int(cap), int(w), N, np.int64 if small else object)
