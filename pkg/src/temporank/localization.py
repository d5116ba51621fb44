"""Resolvent columns and per-node localization bounds on the rank.

The matrix X = (1 - damping) * (Id - damping * M)^{-1}, with M the
stochastic transition matrix (dangling rows patched), satisfies
pi = X^T v for every admissible personalization vector v.  Node i's rank
is therefore a convex combination of column i of X, pinned between the
column minimum and the diagonal entry, whatever v is chosen.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy import linalg

from . import _kernels
from .accumulate import StochasticSnapshot, accumulate_continuous, accumulate_discrete, row_normalize
from .errors import InternalError, InvalidInputError
from .graph import DiscreteTemporalNetwork
from .pagerank import DIRECT_SOLVE_MAX_N, _check_probability, _run_instants
from .quadrature import QuadratureConfig
from .schedules import (DampingSchedule, DecayKernel, PersonalizationSchedule,
                        damping_at, personalization_at)

__all__ = [
    "ResolventColumn", "LocalizationBounds",
    "resolvent_column", "bounds_for_node", "bounds_trajectory",
]

_DOMINANCE_TOL = 1e-10


@dataclass(frozen=True)
class ResolventColumn:
    """Column ``node`` of X at one instant: entries (X_1i, ..., X_ni)."""

    node: int
    column: np.ndarray
    damping: float
    instant: float


@dataclass(frozen=True)
class LocalizationBounds:
    """Intervals [lo, hi] containing each node's rank at each instant.

    ``lo[k, m]`` and ``hi[k, m]`` bound node ``nodes[m]`` (0-based) at
    ``instants[k]``, for every personalization vector simultaneously.
    """

    instants: np.ndarray
    nodes: np.ndarray
    lo: np.ndarray
    hi: np.ndarray


def _apply_m(snapshot: StochasticSnapshot, u: np.ndarray | None, x: np.ndarray) -> np.ndarray:
    matrix = snapshot.matrix
    y = _kernels.csr_matvec(matrix.indptr, matrix.indices, matrix.data,
                            x, snapshot.n)
    if u is not None:
        # dangling rows of M contain u^T: (d u^T) x = d * <u, x>
        y += snapshot.dangling * float(u @ x)
    return y


def _require_u(snapshot: StochasticSnapshot, u: np.ndarray | None) -> np.ndarray | None:
    if snapshot.dangling.any():
        if u is None:
            raise InvalidInputError(
                "network has dangling rows at this instant; "
                "a dangling distribution u is required")
        return _check_probability(u, snapshot.n, "dangling distribution")
    return None


def resolvent_column(snapshot: StochasticSnapshot, damping: float, node: int,
                     u: np.ndarray | None = None, tol: float = 1e-12,
                     method: str = "auto") -> ResolventColumn:
    """Column ``node`` (0-based) of X = (1-damping)(Id - damping*M)^{-1}.

    ``method`` is ``"direct"`` (dense solve), ``"neumann"`` (truncated
    series of sparse products), or ``"auto"``.  The series is cut once both
    the running term's 1-norm falls below tol*(1-damping) and the geometric
    tail bound damping^{m+1} falls below tol, which caps the componentwise
    truncation error at tol.
    """
    if not 0.0 < damping < 1.0:
        raise InvalidInputError(f"damping {damping} outside (0, 1)")
    n = snapshot.n
    if not 0 <= node < n:
        raise InvalidInputError(f"node {node} outside 0..{n - 1}")
    u = _require_u(snapshot, u)
    if method == "auto":
        method = "direct" if n <= DIRECT_SOLVE_MAX_N else "neumann"
    if method == "direct":
        column = _resolvent_columns_direct(snapshot, damping, [node], u)[:, 0]
    elif method == "neumann":
        column = _resolvent_column_neumann(snapshot, damping, node, u, tol)
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    return ResolventColumn(node, column, damping, snapshot.instant)


def _resolvent_columns_direct(snapshot: StochasticSnapshot, damping: float,
                              nodes, u: np.ndarray | None) -> np.ndarray:
    n = snapshot.n
    m = snapshot.matrix.toarray()
    if u is not None:
        dangling = np.flatnonzero(snapshot.dangling == 1)
        m[dangling, :] += u[None, :]
    system = np.eye(n) - damping * m
    rhs = np.zeros((n, len(nodes)))
    rhs[list(nodes), range(len(nodes))] = 1.0
    lu, piv = linalg.lu_factor(system)
    return (1.0 - damping) * linalg.lu_solve((lu, piv), rhs)


def _resolvent_column_neumann(snapshot: StochasticSnapshot, damping: float,
                              node: int, u: np.ndarray | None, tol: float) -> np.ndarray:
    term = np.zeros(snapshot.n)
    term[node] = 1.0
    total = term.copy()
    tail = damping
    while True:
        term = damping * _apply_m(snapshot, u, term)
        total += term
        if float(np.abs(term).sum()) <= tol * (1.0 - damping) and tail <= tol:
            break
        tail *= damping
    return (1.0 - damping) * total


def bounds_for_node(snapshot: StochasticSnapshot, damping: float, node: int,
                    u: np.ndarray | None = None, tol: float = 1e-12,
                    method: str = "auto") -> tuple[float, float]:
    """(lo, hi) = (min of column ``node`` of X, its diagonal entry).

    The diagonal must also be the column maximum; a violation beyond
    tolerance means the solver broke and raises :class:`InternalError`.
    """
    column = resolvent_column(snapshot, damping, node, u, tol, method).column
    return _column_bounds(column, node)


def _column_bounds(column: np.ndarray, node: int) -> tuple[float, float]:
    hi = float(column[node])
    top = float(column.max())
    if top > hi + _DOMINANCE_TOL:
        raise InternalError(
            f"resolvent column {node}: diagonal {hi!r} is not the maximum {top!r}")
    return float(column.min()), hi


def bounds_trajectory(net, kernel: DecayKernel, damping: DampingSchedule,
                      nodes=None, grid=None, quad: QuadratureConfig = QuadratureConfig(),
                      dangling_dist: PersonalizationSchedule | None = None,
                      tol: float = 1e-12, threads: int = 1) -> LocalizationBounds:
    """Localization bounds per requested instant and node.

    For a discrete network the instants are its own; for a continuous one
    ``grid`` supplies the evaluation times.  Bounds are computed from the
    same patched transition matrix the trajectory uses: with no dangling
    rows, every trajectory with every personalization schedule stays
    inside them; with dangling rows they hold for every personalization
    under the fixed dangling distribution ``dangling_dist`` (trajectories
    default theirs to the personalization schedule, so pass the same one
    here to bound them).
    """
    discrete = isinstance(net, DiscreteTemporalNetwork)
    if discrete:
        instants = np.asarray(net.instants, dtype=float)
    else:
        if grid is None:
            raise InvalidInputError("continuous networks need an evaluation grid")
        instants = np.asarray(grid, dtype=float)
    count = len(instants)
    if nodes is None:
        if net.n > DIRECT_SOLVE_MAX_N:
            raise InvalidInputError(
                f"with n={net.n} > {DIRECT_SOLVE_MAX_N} an explicit node subset is required")
        nodes = np.arange(net.n)
    nodes = np.asarray(nodes, dtype=int)
    if nodes.size and not ((0 <= nodes) & (nodes < net.n)).all():
        raise InvalidInputError(f"node subset outside 0..{net.n - 1}")

    def bounds_at(k: int):
        if discrete:
            snapshot = row_normalize(accumulate_discrete(net, kernel, k))
            adjacency = net.snapshot_at(k)
        else:
            snapshot = accumulate_continuous(net, kernel, float(instants[k - 1]), quad)
            adjacency = net.adjacency_at(float(instants[k - 1]))
        t_k = float(instants[k - 1])
        lam = damping_at(damping, k, count, t_k)
        u = None
        if snapshot.dangling.any():
            if dangling_dist is None:
                raise InvalidInputError(
                    f"dangling rows at instant {k}; a dangling distribution is required")
            u = personalization_at(dangling_dist, adjacency, k, t_k)
        if snapshot.n <= DIRECT_SOLVE_MAX_N:
            columns = _resolvent_columns_direct(snapshot, lam, nodes, u)
        else:
            columns = np.column_stack([
                _resolvent_column_neumann(snapshot, lam, node, u, tol)
                for node in nodes])
        pairs = [_column_bounds(columns[:, m], node)
                 for m, node in enumerate(nodes)]
        return (np.array([lo for lo, _ in pairs]),
                np.array([hi for _, hi in pairs]))

    results = _run_instants([partial(bounds_at, k) for k in range(1, count + 1)], threads)
    lo = np.vstack([pair[0] for pair in results]) if count else np.zeros((0, nodes.size))
    hi = np.vstack([pair[1] for pair in results]) if count else np.zeros((0, nodes.size))
    return LocalizationBounds(instants, nodes, lo, hi)
