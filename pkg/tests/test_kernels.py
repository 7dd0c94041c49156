import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from overpartlab import _kernels
from overpartlab.combinatorics import ClassSpec, ClassTag, _rules

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.fixture
def both_paths():
    def run(fn):
        _kernels.set_jit(True)
        try:
            fast = fn()
            _kernels.set_jit(False)
            slow = fn()
        finally:
            _kernels.set_jit(True)
        return fast, slow
    return run


mats = arrays(np.int64, st.tuples(st.integers(1, 5), st.integers(1, 8)), elements=st.integers(-50, 50))


@given(mats, mats, st.integers(1, 10))
def test_conv2d_paths_agree(a, b, ncols):
    fast = _kernels.conv2d(a, b, ncols)
    _kernels.set_jit(False)
    try:
        slow = _kernels.conv2d(a, b, ncols)
    finally:
        _kernels.set_jit(True)
    assert np.array_equal(fast, slow)
    full = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=np.int64)
    for i, j in np.ndindex(a.shape):
        full[i:i + b.shape[0], j:j + b.shape[1]] += a[i, j] * b
    width = min(ncols, full.shape[1])
    assert np.array_equal(fast[:, :width], full[:, :width])


@given(mats, st.sampled_from([-1, 1]), st.integers(-2, 2), st.integers(1, 3), st.integers(1, 10))
def test_divide_binomial_paths_agree(s, c, i, j, ncols):
    f, off_f = _kernels.divide_binomial(s, c, i, j, ncols)
    _kernels.set_jit(False)
    try:
        g, off_g = _kernels.divide_binomial(s, c, i, j, ncols)
    finally:
        _kernels.set_jit(True)
    assert off_f == off_g and np.array_equal(f, g)


@pytest.mark.parametrize("spec", [ClassSpec(ClassTag.U, 3, 7, 4), ClassSpec(ClassTag.UBAR, 2, 5, 2),
                                  ClassSpec(ClassTag.C, 1, 3, 2), ClassSpec(ClassTag.G, 2, 6, 4)])
def test_count_table_paths_agree(spec, both_paths):
    allowed, cap, w = _rules(spec, 18)
    fast, slow = both_paths(lambda: _kernels.count_table(allowed, 18, cap, w))
    assert np.array_equal(fast, slow)


def test_object_fallback_for_huge_values():
    a = np.array([[2 ** 40, 1]], dtype=np.int64)
    out = _kernels.conv2d(a, a, 3)
    assert out.dtype == object and out[0, 0] == 2 ** 80
