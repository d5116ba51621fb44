"""Backend parity: numba-compiled kernels against the numpy fallback."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import sparse

from temporank import _kernels
from temporank._kernels import (BACKEND, IMPLEMENTATIONS, csr_matvec,
                                csr_t_matvec, merge_count_inversions)

HAS_NUMBA = IMPLEMENTATIONS["numba"] is not None
needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba backend disabled")


def random_csr(rng, n_rows, n_cols, density=0.3):
    mask = rng.random((n_rows, n_cols)) < density
    dense = np.where(mask, rng.standard_normal((n_rows, n_cols)), 0.0)
    return sparse.csr_array(dense), dense


def brute_inversions(y):
    y = np.asarray(y, dtype=float)
    return sum(int(np.sum(y[i] > y[i + 1:])) for i in range(len(y)))


class TestMatvec:
    def test_matches_scipy(self, rng):
        for trial in range(20):
            n_rows, n_cols = rng.integers(1, 40, size=2)
            matrix, dense = random_csr(rng, int(n_rows), int(n_cols))
            x = rng.standard_normal(int(n_cols))
            y = csr_matvec(matrix.indptr, matrix.indices, matrix.data,
                           x, int(n_cols))
            np.testing.assert_allclose(y, dense @ x, atol=1e-12)

    def test_transpose_matches_scipy(self, rng):
        for trial in range(20):
            n_rows, n_cols = rng.integers(1, 40, size=2)
            matrix, dense = random_csr(rng, int(n_rows), int(n_cols))
            x = rng.standard_normal(int(n_rows))
            y = csr_t_matvec(matrix.indptr, matrix.indices, matrix.data,
                             x, int(n_cols))
            np.testing.assert_allclose(y, dense.T @ x, atol=1e-12)

    def test_empty_rows_contribute_nothing(self):
        dense = np.array([[0.0, 2.0], [0.0, 0.0], [3.0, 0.0]])
        matrix = sparse.csr_array(dense)
        x = np.array([1.0, 10.0])
        y = csr_matvec(matrix.indptr, matrix.indices, matrix.data, x, 2)
        np.testing.assert_array_equal(y, [20.0, 0.0, 3.0])

    @needs_numba
    def test_backends_bit_identical(self, rng):
        numpy_impls = IMPLEMENTATIONS["numpy"]
        numba_impls = IMPLEMENTATIONS["numba"]
        for trial in range(20):
            n_rows, n_cols = (int(v) for v in rng.integers(1, 60, size=2))
            matrix, _ = random_csr(rng, n_rows, n_cols)
            for name, x_len in (("csr_matvec", n_cols),
                                ("csr_t_matvec", n_rows)):
                x = rng.standard_normal(x_len)
                args = (matrix.indptr, matrix.indices, matrix.data, x, n_cols)
                assert np.array_equal(numpy_impls[name](*args),
                                      numba_impls[name](*args))


class TestMergeCount:
    def test_known_counts(self):
        assert merge_count_inversions(np.array([3.0, 1.0, 2.0, 1.0]))[0] == 4
        assert merge_count_inversions(np.array([1.0, 2.0, 3.0]))[0] == 0
        assert merge_count_inversions(np.array([3.0, 2.0, 1.0]))[0] == 3
        assert merge_count_inversions(np.array([2.0, 2.0, 2.0]))[0] == 0

    def test_tiny_inputs(self):
        assert merge_count_inversions(np.array([]))[0] == 0
        assert merge_count_inversions(np.array([5.0]))[0] == 0

    def test_returns_sorted_copy_and_preserves_input(self, rng):
        y = rng.standard_normal(50)
        original = y.copy()
        count, ordered = merge_count_inversions(y)
        np.testing.assert_array_equal(y, original)
        np.testing.assert_array_equal(ordered, np.sort(y))
        assert count == brute_inversions(y)

    def test_random_against_brute_force(self, rng):
        for trial in range(30):
            length = int(rng.integers(0, 120))
            y = rng.integers(0, 8, size=length).astype(float)  # many ties
            assert merge_count_inversions(y)[0] == brute_inversions(y)

    @given(st.lists(st.integers(min_value=-5, max_value=5), max_size=60))
    def test_property_matches_brute_force(self, values):
        y = np.array(values, dtype=float)
        count, ordered = merge_count_inversions(y)
        assert count == brute_inversions(y)
        np.testing.assert_array_equal(ordered, np.sort(y))

    @needs_numba
    def test_backends_agree(self, rng):
        numpy_count = IMPLEMENTATIONS["numpy"]["merge_count_inversions"]
        numba_count = IMPLEMENTATIONS["numba"]["merge_count_inversions"]
        for trial in range(20):
            y = rng.integers(0, 10, size=int(rng.integers(2, 200))).astype(float)
            assert int(numpy_count(y.copy())) == int(numba_count(y.copy()))


class TestBackendSelection:
    def test_backend_label_matches_availability(self):
        assert BACKEND == ("numba" if HAS_NUMBA else "numpy")
        assert set(IMPLEMENTATIONS) == {"numpy", "numba"}
        assert set(IMPLEMENTATIONS["numpy"]) == {
            "csr_matvec", "csr_t_matvec", "merge_count_inversions"}

    def test_env_flag_forces_numpy_fallback(self):
        probe = (
            "import json\n"
            "import numpy as np\n"
            "from temporank import _kernels, kendall_tau\n"
            "assert _kernels.BACKEND == 'numpy'\n"
            "assert _kernels.IMPLEMENTATIONS['numba'] is None\n"
            "inv, srt = _kernels.merge_count_inversions("
            "np.array([3.0, 1.0, 2.0, 1.0]))\n"
            "tau = kendall_tau([1, 2, 2, 3], [3, 2, 2, 1])\n"
            "print(json.dumps({'inv': inv, 'sorted': srt.tolist(),"
            " 'tau': tau}))\n"
        )
        env = dict(os.environ, TEMPORANK_DISABLE_NUMBA="1")
        result = subprocess.run([sys.executable, "-c", probe],
                                capture_output=True, text=True, env=env)
        assert result.returncode == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["inv"] == 4
        assert payload["sorted"] == [1.0, 1.0, 2.0, 3.0]
        # same bits as whatever backend this process runs
        from temporank import kendall_tau
        assert payload["tau"] == kendall_tau([1, 2, 2, 3], [3, 2, 2, 1])
