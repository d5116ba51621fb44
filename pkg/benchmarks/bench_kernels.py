"""Timing comparison of the jit kernels against their numpy fallbacks.

Run with `python benchmarks/bench_kernels.py [n]`.  The same inputs go
through both implementations; results must agree exactly (identical
accumulation order), so any difference is a bug, not noise.
"""

import sys
import time

import numpy as np

from temporank import _kernels


def build_csr(n: int, per_row: int, rng):
    indptr = np.arange(0, n * per_row + 1, per_row, dtype=np.int64)
    indices = rng.integers(0, n, size=n * per_row, dtype=np.int64)
    data = rng.random(n * per_row)
    return indptr, indices, data


def timeit(fn, args, repeats=5):
    # fresh copies each run: merge_count_inversions sorts its input in place
    best = float("inf")
    result = None
    for _ in range(repeats):
        fresh = tuple(a.copy() if isinstance(a, np.ndarray) else a for a in args)
        start = time.perf_counter()
        result = fn(*fresh)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    rng = np.random.default_rng(7)
    indptr, indices, data = build_csr(n, 8, rng)
    x = rng.random(n)
    y = rng.random(n // 2)

    backends = {name: impl for name, impl in _kernels.IMPLEMENTATIONS.items()
                if impl is not None}
    print(f"active backend: {_kernels.BACKEND}; n={n}, nnz={len(data)}")
    if "numba" in backends:
        # trigger compilation outside the timed region
        backends["numba"]["csr_matvec"](indptr, indices, data, x, n)
        backends["numba"]["csr_t_matvec"](indptr, indices, data, x, n)
        backends["numba"]["merge_count_inversions"](y.copy())

    rows = []
    for op, args in [("csr_matvec", (indptr, indices, data, x, n)),
                     ("csr_t_matvec", (indptr, indices, data, x, n)),
                     ("merge_count_inversions", (y,))]:
        outputs = {}
        for name, impl in backends.items():
            seconds, outputs[name] = timeit(impl[op], args)
            rows.append((op, name, seconds))
        if len(outputs) == 2:
            assert np.array_equal(outputs["numpy"], outputs["numba"]), op

    width = max(len(op) for op, _, _ in rows)
    for op, name, seconds in rows:
        print(f"{op:<{width}}  {name:<6}  {seconds * 1e3:9.3f} ms")
    if len(backends) == 2:
        print("outputs identical across backends")


if __name__ == "__main__":
    main()
