"""Monte-Carlo power of the asymptotic WMW test under two synthetic distributions.

Every replication owns a PCG64 stream derived from ``(seed, replication
index)``, so results do not depend on how replications are split across
threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .synthetic import WeightedSample
from .wmwtest import wmw_z_from_counts

THREADS_ENV = "WMWPLAN_THREADS"

# bounds on the per-chunk work arrays
_MAX_CELLS = 2_000_000


class AliasTable:
    """Vose's alias method over ``len(probs)`` outcomes."""

    def __init__(self, probs):
        probs = np.asarray(probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("need a nonempty probability vector")
        if np.any(probs < 0) or not np.any(probs > 0):
            raise ValueError("probabilities must be nonnegative and not all zero")
        k = probs.size
        scaled = list(probs / probs.sum() * k)
        prob = [1.0] * k
        alias = list(range(k))
        small = [i for i, p in enumerate(scaled) if p < 1.0]
        large = [i for i, p in enumerate(scaled) if p >= 1.0]
        while small and large:
            s, g = small.pop(), large.pop()
            prob[s] = scaled[s]
            alias[s] = g
            scaled[g] = (scaled[g] + scaled[s]) - 1.0
            (small if scaled[g] < 1.0 else large).append(g)
        # leftovers are 1 up to rounding
        self.prob = np.array(prob)
        self.alias = np.array(alias, dtype=np.intp)

    def __len__(self) -> int:
        return self.prob.size

    def lookup(self, column: np.ndarray, coin: np.ndarray) -> np.ndarray:
        return np.where(coin < self.prob[column], column, self.alias[column])

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        column = rng.integers(0, len(self), size=size)
        return self.lookup(column, rng.random(size=size))

    def probabilities(self) -> np.ndarray:
        """Outcome probabilities implied by the table (for checking)."""
        k = len(self)
        out = self.prob / k
        np.add.at(out, self.alias, (1.0 - self.prob) / k)
        return out


@dataclass(frozen=True)
class PowerResult:
    power_hat: float
    replications: int
    rejections: int
    seed: int
    mc_stderr: float
    n1: int
    n2: int
    alpha: float

    def as_dict(self) -> dict:
        return asdict(self)


def replication_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _indexed_support(f1: WeightedSample, f2: WeightedSample):
    points = np.unique(np.concatenate([f1.values, f2.values]))
    out = []
    for f in (f1, f2):
        x, mass = f.support()
        out.append((np.searchsorted(points, x), AliasTable(mass)))
    return points.size, out


def simulate_power(
    f1: WeightedSample,
    f2: WeightedSample,
    n1: int,
    n2: int,
    alpha: float = 0.05,
    replications: int = 10_000,
    seed: int = 0,
    workers: int | None = None,
) -> PowerResult:
    """Rejection rate of the WMW test when drawing n1 from f1 and n2 from f2.

    Draws are i.i.d. with probabilities proportional to the weights.
    """
    if int(n1) != n1 or int(n2) != n2 or n1 < 2 or n2 < 2:
        raise ValueError(f"group sizes must be integers >= 2, got {n1}, {n2}")
    if replications < 1:
        raise ValueError("need at least one replication")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    n1, n2, replications = int(n1), int(n2), int(replications)
    workers = default_workers() if workers is None else max(1, int(workers))

    K, ((map1, tab1), (map2, tab2)) = _indexed_support(f1, f2)
    chunk = max(1, min(replications, _MAX_CELLS // max(K, n1 + n2)))
    starts = range(0, replications, chunk)

    def run(start: int) -> int:
        stop = min(start + chunk, replications)
        rows = stop - start
        idx1 = np.empty((rows, n1), dtype=np.intp)
        idx2 = np.empty((rows, n2), dtype=np.intp)
        for r in range(rows):
            rng = replication_rng(seed, start + r)
            idx1[r] = map1[tab1.sample(rng, n1)]
            idx2[r] = map2[tab2.sample(rng, n2)]
        offset = (np.arange(rows) * K)[:, None]
        c1 = np.bincount((idx1 + offset).ravel(), minlength=rows * K).reshape(rows, K)
        c2 = np.bincount((idx2 + offset).ravel(), minlength=rows * K).reshape(rows, K)
        _, p_value = wmw_z_from_counts(c1, c2)
        return int(np.count_nonzero(p_value <= alpha))

    if workers == 1:
        rejections = sum(run(s) for s in starts)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rejections = sum(pool.map(run, starts))

    power_hat = rejections / replications
    return PowerResult(
        power_hat=power_hat,
        replications=replications,
        rejections=rejections,
        seed=seed,
        mc_stderr=math.sqrt(power_hat * (1.0 - power_hat) / replications),
        n1=n1,
        n2=n2,
        alpha=alpha,
    )
