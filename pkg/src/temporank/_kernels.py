"""Hot numeric kernels: numba-compiled with a pure-numpy fallback.

The numba path is used when numba imports cleanly; setting either
``TEMPORANK_DISABLE_NUMBA`` or ``NUMBA_DISABLE_JIT`` in the environment
forces the numpy fallback.  Both paths accumulate in the same order, so
results are bit-identical and everything downstream is backend-agnostic.

``benchmarks/bench_kernels.py`` times the two paths against each other.
"""

import os

import numpy as np

__all__ = [
    "BACKEND",
    "csr_matvec",
    "csr_t_matvec",
    "merge_count_inversions",
    "IMPLEMENTATIONS",
]


def _csr_matvec_numpy(indptr, indices, data, x, n_cols):
    """y = A @ x for CSR (indptr, indices, data) with shape (len(indptr)-1, n_cols)."""
    n_rows = indptr.shape[0] - 1
    rows = np.repeat(np.arange(n_rows), np.diff(indptr))
    y = np.zeros(n_rows, dtype=np.float64)
    np.add.at(y, rows, data * x[indices])
    return y


def _csr_t_matvec_numpy(indptr, indices, data, x, n_cols):
    """y = A.T @ x (scatter along rows of A, in CSR storage order)."""
    n_rows = indptr.shape[0] - 1
    y = np.zeros(n_cols, dtype=np.float64)
    np.add.at(y, indices, data * np.repeat(x, np.diff(indptr)))
    return y


def _merge_count_numpy(y):
    """Sort ``y`` in place (bottom-up merge) and return the inversion count.

    An inversion is a pair i < j with y[i] > y[j] strictly; ties do not count.
    """
    n = y.shape[0]
    inv = 0
    width = 1
    while width < n:
        for lo in range(0, n - width, 2 * width):
            mid = lo + width
            hi = min(lo + 2 * width, n)
            left = y[lo:mid]
            right = y[mid:hi]
            # pairs (l, r) with l > r  ==  |left|*|right| - #(l <= r)
            inv += left.size * right.size - int(
                np.searchsorted(left, right, side="right").sum()
            )
            y[lo:hi] = np.sort(y[lo:hi], kind="stable")
        width *= 2
    return inv


def _build_numba():
    if "TEMPORANK_DISABLE_NUMBA" in os.environ or "NUMBA_DISABLE_JIT" in os.environ:
        return None
    try:
        from numba import njit
    except ImportError:
        return None

    @njit(cache=True)
    def csr_matvec_jit(indptr, indices, data, x, n_cols):
        n_rows = indptr.shape[0] - 1
        y = np.zeros(n_rows, dtype=np.float64)
        for i in range(n_rows):
            acc = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                acc += data[p] * x[indices[p]]
            y[i] = acc
        return y

    @njit(cache=True)
    def csr_t_matvec_jit(indptr, indices, data, x, n_cols):
        n_rows = indptr.shape[0] - 1
        y = np.zeros(n_cols, dtype=np.float64)
        for i in range(n_rows):
            xi = x[i]
            if xi != 0.0:
                for p in range(indptr[i], indptr[i + 1]):
                    y[indices[p]] += data[p] * xi
        return y

    @njit(cache=True)
    def merge_count_jit(y):
        n = y.shape[0]
        buf = np.empty_like(y)
        inv = np.int64(0)
        width = 1
        while width < n:
            for lo in range(0, n - width, 2 * width):
                mid = lo + width
                hi = min(lo + 2 * width, n)
                i = lo
                j = mid
                m = lo
                while i < mid and j < hi:
                    if y[j] < y[i]:
                        buf[m] = y[j]
                        inv += mid - i
                        j += 1
                    else:
                        buf[m] = y[i]
                        i += 1
                    m += 1
                while i < mid:
                    buf[m] = y[i]
                    i += 1
                    m += 1
                while j < hi:
                    buf[m] = y[j]
                    j += 1
                    m += 1
                y[lo:hi] = buf[lo:hi]
            width *= 2
        return inv

    return {
        "csr_matvec": csr_matvec_jit,
        "csr_t_matvec": csr_t_matvec_jit,
        "merge_count_inversions": merge_count_jit,
    }


_NUMPY_IMPLS = {
    "csr_matvec": _csr_matvec_numpy,
    "csr_t_matvec": _csr_t_matvec_numpy,
    "merge_count_inversions": _merge_count_numpy,
}

_NUMBA_IMPLS = _build_numba()

#: both backends, keyed by name; the numba entry is None when unavailable
IMPLEMENTATIONS = {"numpy": _NUMPY_IMPLS, "numba": _NUMBA_IMPLS}

if _NUMBA_IMPLS is not None:
    BACKEND = "numba"
    csr_matvec = _NUMBA_IMPLS["csr_matvec"]
    csr_t_matvec = _NUMBA_IMPLS["csr_t_matvec"]
    _merge_count = _NUMBA_IMPLS["merge_count_inversions"]
else:
    BACKEND = "numpy"
    csr_matvec = _csr_matvec_numpy
    csr_t_matvec = _csr_t_matvec_numpy
    _merge_count = _merge_count_numpy


def merge_count_inversions(y):
    """Inversion count of ``y`` plus the sorted array (input untouched)."""
    work = np.ascontiguousarray(y, dtype=np.float64).copy()
    inv = int(_merge_count(work))
    return inv, work
