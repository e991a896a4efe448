"""Midranks, within-group ranks and placements for pooled two-group data."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _as_finite_array(values, name: str = "values") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size == 0:
        raise ValueError("empty sample")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def midranks(values) -> np.ndarray:
    """Return the midrank of every entry of ``values``.

    The rank of ``v`` is ``#{u < v} + (#{u == v} + 1) / 2``.  Ties are decided
    by exact equality; results are exact multiples of 1/2.
    """
    arr = _as_finite_array(values)
    _, inverse, counts = np.unique(arr, return_inverse=True, return_counts=True)
    below = np.cumsum(counts) - counts
    return (below + (counts + 1) / 2.0)[inverse.reshape(-1)]


@dataclass(frozen=True)
class RankSummary:
    overall_ranks_g1: np.ndarray
    overall_ranks_g2: np.ndarray
    within_ranks_g1: np.ndarray
    within_ranks_g2: np.ndarray
    placements_g1: np.ndarray
    placements_g2: np.ndarray

    @property
    def n1(self) -> int:
        return self.overall_ranks_g1.size

    @property
    def n2(self) -> int:
        return self.overall_ranks_g2.size

    @property
    def N(self) -> int:
        return self.n1 + self.n2

    def rank_means(self) -> tuple[float, float]:
        return (
            math.fsum(self.overall_ranks_g1) / self.n1,
            math.fsum(self.overall_ranks_g2) / self.n2,
        )


def rank_summary(g1, g2) -> RankSummary:
    """Rank two groups against each other.

    Placements are overall midranks minus within-group midranks, so that
    ``placements_g1[k] == n2 * F2(g1[k])`` with ``F2`` the normalized ECDF of
    the second group.
    """
    a = _as_finite_array(g1, "g1")
    b = _as_finite_array(g2, "g2")
    overall = midranks(np.concatenate([a, b]))
    r1, r2 = overall[: a.size], overall[a.size :]
    w1, w2 = midranks(a), midranks(b)
    return RankSummary(
        overall_ranks_g1=r1,
        overall_ranks_g2=r2,
        within_ranks_g1=w1,
        within_ranks_g2=w2,
        placements_g1=r1 - w1,
        placements_g2=r2 - w2,
    )
