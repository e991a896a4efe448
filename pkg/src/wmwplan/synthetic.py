"""Fixed (synthetic) distributions and the effect generators that build them.

A :class:`WeightedSample` is not a random sample: it *is* the distribution,
given as point masses proportional to ``weights``.  The effect generators
derive the relevant alternative from prior data of the reference group.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import special


@dataclass(frozen=True)
class WeightedSample:
    values: np.ndarray
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if self.weights is None:
            weights = np.ones_like(values)
        else:
            weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if values.size == 0:
            raise ValueError("empty sample")
        if values.shape != weights.shape:
            raise ValueError(
                f"values and weights differ in length ({values.size} != {weights.size})"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ValueError("weights must be finite and positive")
        values.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_values(cls, values: Iterable[float]) -> WeightedSample:
        return cls(np.fromiter(values, dtype=float))

    def __len__(self) -> int:
        return self.values.size

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    @property
    def probabilities(self) -> np.ndarray:
        return self.weights / self.total_weight

    @property
    def has_unit_weights(self) -> bool:
        return bool(np.all(self.weights == 1.0))

    def mean(self) -> float:
        return float(np.dot(self.probabilities, self.values))

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct support points and their probability masses, sorted."""
        points, inverse = np.unique(self.values, return_inverse=True)
        mass = np.zeros(points.size)
        np.add.at(mass, inverse.reshape(-1), self.weights)
        return points, mass / self.total_weight

    def cdf(self, x) -> np.ndarray:
        """Normalized CDF ``(F(x-) + F(x+)) / 2`` evaluated at ``x``."""
        x = np.asarray(x, dtype=float)
        points, mass = self.support()
        right = np.concatenate([[0.0], np.cumsum(mass)])
        below = right[np.searchsorted(points, x, side="left")]
        upto = right[np.searchsorted(points, x, side="right")]
        return (below + upto) / 2.0

    def expand(self) -> np.ndarray:
        """Unit-weight data with the same distribution; integer weights only."""
        counts = np.rint(self.weights)
        if not np.allclose(counts, self.weights, rtol=0, atol=1e-9):
            raise ValueError("expansion needs integer weights")
        return np.repeat(self.values, counts.astype(np.int64))


def scale_effect(base: WeightedSample, q: float, integer_floor: bool = False) -> WeightedSample:
    """Multiply every value by ``q``; with ``integer_floor`` take ``floor(q * x)``."""
    if not 0 < q <= 1:
        raise ValueError(f"scale factor must lie in (0, 1], got {q}")
    values = q * base.values
    if integer_floor:
        values = np.floor(values)
    return WeightedSample(values, base.weights)


def shift_effect(
    base: WeightedSample, delta: float, round_decimals: int | None = None
) -> WeightedSample:
    values = base.values + delta
    if round_decimals is not None:
        values = np.round(values, round_decimals)
    return WeightedSample(values, base.weights)


def ordinal_shift(
    base_counts: Sequence[float],
    move_fraction: float,
    direction: str = "up",
    categories: Iterable[int] | None = None,
) -> list[float]:
    """Move ``move_fraction`` of each selected category one step in ``direction``.

    Moves are computed from the original counts, so a category both gives
    and receives mass in the same step.  ``categories`` defaults to every
    category that has a receiving neighbour.
    """
    if not 0 <= move_fraction <= 1:
        raise ValueError(f"move_fraction must lie in [0, 1], got {move_fraction}")
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    counts = [float(c) for c in base_counts]
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    k = len(counts)
    step = 1 if direction == "up" else -1
    if categories is None:
        categories = range(k - 1) if step == 1 else range(1, k)
    selected = sorted(set(int(c) for c in categories))
    for c in selected:
        if not 0 <= c < k:
            raise ValueError(f"category {c} out of range 0..{k - 1}")
        if not 0 <= c + step < k and counts[c] > 0:
            raise ValueError(
                f"category {c} has positive count and no neighbour in direction {direction!r}"
            )
    out = list(counts)
    for c in selected:
        if 0 <= c + step < k:
            moved = move_fraction * counts[c]
            out[c] -= moved
            out[c + step] += moved
    return out


def from_frequency_table(categories: Sequence, probs_or_counts: Sequence[float]) -> WeightedSample:
    """Weighted sample over ordinal codes 0, 1, 2, ... in the order given.

    Numeric labels are still coded by position; only order matters for
    rank-based quantities.  Zero-weight categories are dropped.
    """
    entries = np.asarray(probs_or_counts, dtype=float)
    if len(categories) != entries.size:
        raise ValueError("categories and entries differ in length")
    if np.any(entries < 0) or not np.all(np.isfinite(entries)):
        raise ValueError("frequencies must be finite and nonnegative")
    if not np.any(entries > 0):
        raise ValueError("all frequencies are zero")
    codes = np.arange(entries.size, dtype=float)
    keep = entries > 0
    return WeightedSample(codes[keep], entries[keep])


def quantile_grid(cdf_inverse: Callable, m: int) -> WeightedSample:
    """Deterministic synthetic sample ``cdf_inverse((k - 1/2) / m)``, k = 1..m."""
    if m < 1:
        raise ValueError(f"grid size must be positive, got {m}")
    probs = (np.arange(1, m + 1) - 0.5) / m
    try:
        values = np.asarray(cdf_inverse(probs), dtype=float)
        if values.shape != probs.shape:
            raise TypeError
    except (TypeError, ValueError):
        values = np.array([float(cdf_inverse(u)) for u in probs])
    if not np.all(np.isfinite(values)):
        raise ValueError("quantile function returned non-finite values")
    return WeightedSample(values)


def beta_ppf(a: float, b: float) -> Callable[[np.ndarray], np.ndarray]:
    """Inverse CDF of Beta(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("beta shape parameters must be positive")
    return lambda u: special.betaincinv(a, b, u)
