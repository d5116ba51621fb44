"""Time-decayed accumulation of adjacency and its stochastic normalization.

The accumulated matrix B sums (discrete scale) or integrates (continuous
scale) past adjacency weighted by a decay kernel; its row normalization is
the transition matrix the ranking operates on.  A node whose accumulated
row is entirely zero has been dangling at every instant so far and keeps a
zero row here; the teleportation patch happens downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import InvalidInputError
from .graph import ContinuousTemporalNetwork, DiscreteTemporalNetwork
from .quadrature import QuadratureConfig, adaptive_simpson
from .schedules import DecayKernel

__all__ = [
    "AccumulatedMatrix", "StochasticSnapshot",
    "accumulate_discrete", "row_normalize", "accumulate_continuous", "truncate",
]


@dataclass(frozen=True)
class AccumulatedMatrix:
    """Decay-weighted sum of adjacency up to (and including) ``instant``."""

    matrix: sparse.csr_array
    instant: float


@dataclass(frozen=True)
class StochasticSnapshot:
    """Row-normalized accumulated matrix at one instant.

    Rows with ``dangling == 0`` sum to one; rows with ``dangling == 1`` are
    exactly zero.
    """

    matrix: sparse.csr_array
    dangling: np.ndarray
    instant: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _check_kernel_at(kernel: DecayKernel, t: float) -> None:
    if kernel.weight(t, t) <= 0:
        raise InvalidInputError(
            f"decay kernel must be positive at s == t (got {kernel.weight(t, t)!r} at t={t})")


def accumulate_discrete(net: DiscreteTemporalNetwork, kernel: DecayKernel,
                        k: int) -> AccumulatedMatrix:
    """B(t_k) = sum over l <= k of w(t_l, t_k) * A(t_l), for 1-based ``k``.

    Terms are added in ascending l so results are bit-reproducible.
    """
    if not 1 <= k <= net.instant_count:
        raise InvalidInputError(f"instant index {k} outside 1..{net.instant_count}")
    t_k = float(net.instants[k - 1])
    _check_kernel_at(kernel, t_k)
    total = sparse.csr_array((net.n, net.n))
    for l in range(k):
        weight = kernel.weight(float(net.instants[l]), t_k)
        if weight != 0.0:
            total = total + net.snapshots[l] * weight
    return AccumulatedMatrix(sparse.csr_array(total), t_k)


def row_normalize(accumulated) -> StochasticSnapshot:
    """Divide each positive row by its sum; zero rows become dangling."""
    if isinstance(accumulated, AccumulatedMatrix):
        matrix, instant = accumulated.matrix, accumulated.instant
    else:
        matrix, instant = sparse.csr_array(accumulated), float("nan")
    matrix = sparse.csr_array(matrix, dtype=float)
    row_sums = np.asarray(matrix.sum(axis=1)).ravel()
    dangling = (row_sums == 0).astype(np.int8)
    normalized = matrix.copy()
    if normalized.nnz:
        per_entry = np.repeat(np.where(row_sums > 0, row_sums, 1.0),
                              np.diff(normalized.indptr))
        normalized.data = normalized.data / per_entry
    return StochasticSnapshot(normalized, dangling, instant)


def accumulate_continuous(net: ContinuousTemporalNetwork, kernel: DecayKernel,
                          t: float, quad: QuadratureConfig = QuadratureConfig()
                          ) -> StochasticSnapshot:
    """Row normalization of B(t), B_ij(t) = integral of w(s, t) a_ij(s) ds.

    At t == t0 the integral degenerates, so the snapshot is the row
    normalization of the pointwise adjacency A(t0) instead.
    """
    t = float(t)
    t0, t1 = net.interval
    if not t0 <= t <= t1:
        raise InvalidInputError(f"t={t} outside the network interval [{t0}, {t1}]")
    _check_kernel_at(kernel, t)
    if t == t0:
        snapshot = row_normalize(net.adjacency_at(t0))
        return StochasticSnapshot(snapshot.matrix, snapshot.dangling, t0)

    weight = kernel.profile(t)
    rows, cols, vals = [], [], []
    for (i, j), fn in sorted(net.edges.items()):
        scalar = fn.scalar_fn
        value = adaptive_simpson(lambda s: weight(s) * scalar(s), t0, t,
                                 quad, label=f"edge ({i + 1}, {j + 1})")
        rows.append(i)
        cols.append(j)
        vals.append(value)
    accumulated = sparse.csr_array(
        sparse.coo_array((vals, (rows, cols)), shape=(net.n, net.n)))
    accumulated.eliminate_zeros()
    snapshot = row_normalize(accumulated)
    return StochasticSnapshot(snapshot.matrix, snapshot.dangling, t)


def truncate(net: ContinuousTemporalNetwork, count: int) -> DiscreteTemporalNetwork:
    """Sample the network on the uniform partition with ``count`` points.

    Snapshot k is the pointwise adjacency at s_k = t0 + (k-1)(t1-t0)/(count-1).
    """
    if count < 2:
        raise InvalidInputError(f"partition needs at least 2 points, got {count}")
    t0, t1 = net.interval
    instants = t0 + (t1 - t0) * np.arange(count) / (count - 1)
    edge_items = sorted(net.edges.items())
    values = np.empty((len(edge_items), count))
    for row, ((i, j), fn) in enumerate(edge_items):
        values[row] = fn(instants)
    rows = np.array([i for (i, _), _ in edge_items], dtype=int)
    cols = np.array([j for (_, j), _ in edge_items], dtype=int)
    snapshots = []
    for k in range(count):
        matrix = sparse.csr_array(
            sparse.coo_array((values[:, k], (rows, cols)), shape=(net.n, net.n)))
        matrix.eliminate_zeros()
        snapshots.append(matrix)
    return DiscreteTemporalNetwork(net.n, instants, tuple(snapshots))
