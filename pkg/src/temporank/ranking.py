"""Rank comparison: Kendall tau-b and per-instant trajectory agreement.

The coefficient is the tie-corrected tau-b,

    tau = (C - D) / sqrt((n0 - T_x) * (n0 - T_y)),

with C/D the concordant/discordant pair counts, n0 = n(n-1)/2 and
T_x/T_y the tie-pair counts of each vector.  tau-b is 1 exactly when the
two weak orders coincide, ties included, and -1 for opposite strict
orders; the plain untied variant cannot reach 1 in the presence of ties.
Discordances are counted by merge sort, so a comparison costs O(n log n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidInputError, UndefinedTauError
from .pagerank import PageRankTrajectory

__all__ = ["TauSeries", "kendall_tau", "compare_trajectories"]


@dataclass(frozen=True)
class TauSeries:
    """Kendall tau-b between two trajectories at each shared instant."""

    instants: np.ndarray
    taus: np.ndarray
    labels: tuple[str, str]

    def __post_init__(self):
        if self.instants.shape != self.taus.shape:
            raise InvalidInputError("instants and taus must align")


def _tie_pairs(values: np.ndarray) -> int:
    # values sorted ascending; pairs inside runs of equal entries
    change = np.flatnonzero(values[1:] != values[:-1])
    bounds = np.concatenate(([0], change + 1, [values.size]))
    runs = np.diff(bounds)
    return int((runs * (runs - 1) // 2).sum())


def _joint_tie_pairs(xs: np.ndarray, ys: np.ndarray) -> int:
    change = np.flatnonzero((xs[1:] != xs[:-1]) | (ys[1:] != ys[:-1]))
    bounds = np.concatenate(([0], change + 1, [xs.size]))
    runs = np.diff(bounds)
    return int((runs * (runs - 1) // 2).sum())


def _as_scores(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size < 2:
        raise InvalidInputError(f"{name} needs at least 2 entries, got {arr.size}")
    if not np.isfinite(arr).all():
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


def kendall_tau(x, y) -> float:
    """Kendall tau-b between two equally long score vectors.

    Scores are compared directly; only their order matters, so converting
    to integer ranks first would change nothing.  Raises
    :class:`UndefinedTauError` when either vector is entirely tied (the
    denominator vanishes and no order comparison is possible).
    """
    x = _as_scores(x, "x")
    y = _as_scores(y, "y")
    if x.size != y.size:
        raise InvalidInputError(f"length mismatch: {x.size} vs {y.size}")
    n = x.size
    order = np.lexsort((y, x))
    xs = x[order]
    ys = y[order]
    # after the lexicographic sort, y is ascending inside each run of tied
    # x, so every remaining y-inversion crosses strictly increasing x and
    # is exactly one discordant pair
    t_x = _tie_pairs(xs)
    t_xy = _joint_tie_pairs(xs, ys)
    discordant, ys_sorted = _kernels.merge_count_inversions(ys)
    t_y = _tie_pairs(ys_sorted)
    n0 = n * (n - 1) // 2
    if n0 == t_x or n0 == t_y:
        raise UndefinedTauError(
            "tau is undefined: at least one input is entirely tied")
    concordant_minus_discordant = n0 - t_x - t_y + t_xy - 2 * discordant
    # the product can exceed 2**63 for large n, so take it in floats
    return concordant_minus_discordant / math.sqrt(float(n0 - t_x) * float(n0 - t_y))


def compare_trajectories(a: PageRankTrajectory, b: PageRankTrajectory,
                         labels: tuple[str, str] | None = None) -> TauSeries:
    """Per-instant tau-b between two trajectories on the same grid.

    Instants must match exactly.  Labels default to each trajectory's
    ``label`` metadata, falling back to "a" and "b".
    """
    if a.n != b.n:
        raise InvalidInputError(f"node count mismatch: {a.n} vs {b.n}")
    if not np.array_equal(a.instants, b.instants):
        raise InvalidInputError("trajectories are sampled at different instants")
    if labels is None:
        labels = (str(a.metadata.get("label", "a")), str(b.metadata.get("label", "b")))
    taus = np.array([kendall_tau(a.vectors[k], b.vectors[k])
                     for k in range(len(a.instants))])
    return TauSeries(np.asarray(a.instants, dtype=float), taus, labels)
