"""Relative effect and variance components of two fixed distributions.

Two independent routes compute the same quantities:

* :func:`estimands_by_ranks` works on unit-weight data through pooled
  midranks and placements;
* :func:`estimands_by_integrals` integrates normalized CDFs against weighted
  point masses and is the engine used for planning.

For unit weights the two agree to rounding error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .ranking import rank_summary
from .synthetic import WeightedSample


@dataclass(frozen=True)
class Estimands:
    p_star: float
    sigma2_null: float
    sigma2_1: float
    sigma2_2: float
    n1: float
    n2: float

    @property
    def sigma_null(self) -> float:
        return math.sqrt(self.sigma2_null)

    @property
    def sigma1(self) -> float:
        return math.sqrt(self.sigma2_1)

    @property
    def sigma2(self) -> float:
        return math.sqrt(self.sigma2_2)

    @property
    def kappa(self) -> float:
        """Ratio sigma2 / sigma1; infinite if only sigma1 vanishes."""
        if self.sigma2_1 == 0.0:
            if self.sigma2_2 == 0.0:
                raise ValueError("kappa undefined: both alternative variances are zero")
            return math.inf
        return self.sigma2 / self.sigma1

    def swapped(self) -> Estimands:
        return replace(
            self,
            p_star=1.0 - self.p_star,
            sigma2_1=self.sigma2_2,
            sigma2_2=self.sigma2_1,
            n1=self.n2,
            n2=self.n1,
        )

    def as_dict(self) -> dict:
        try:
            kappa = self.kappa
        except ValueError:
            kappa = None
        return {
            "p_star": self.p_star,
            "sigma_null": self.sigma_null,
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "kappa": kappa if kappa is None or math.isfinite(kappa) else None,
        }


def _nonneg(x: float) -> float:
    # cancellation can leave -1e-17 where the exact value is 0
    return max(float(x), 0.0)


def estimands_by_ranks(g1, g2) -> Estimands:
    """Estimands from pooled midranks and placements of unit-weight data."""
    if isinstance(g1, WeightedSample):
        g1 = g1.expand() if not g1.has_unit_weights else g1.values
    if isinstance(g2, WeightedSample):
        g2 = g2.expand() if not g2.has_unit_weights else g2.values
    rs = rank_summary(g1, g2)
    n1, n2, N = rs.n1, rs.n2, rs.N
    r1_mean, r2_mean = rs.rank_means()
    p = (r2_mean - r1_mean) / N + 0.5

    centre = (N + 1) / 2.0
    pooled = np.concatenate([rs.overall_ranks_g1, rs.overall_ranks_g2]) - centre
    s2_null = math.fsum(pooled * pooled) / N**3

    d1 = rs.placements_g1 - math.fsum(rs.placements_g1) / n1
    d2 = rs.placements_g2 - math.fsum(rs.placements_g2) / n2
    s2_1 = math.fsum(d1 * d1) / (n1 * n2**2)
    s2_2 = math.fsum(d2 * d2) / (n1**2 * n2)
    return Estimands(
        p_star=_clip01(float(p)),
        sigma2_null=_nonneg(s2_null),
        sigma2_1=_nonneg(s2_1),
        sigma2_2=_nonneg(s2_2),
        n1=n1,
        n2=n2,
    )


def _masses_on(points: np.ndarray, sample: WeightedSample) -> np.ndarray:
    mass = np.zeros(points.size)
    np.add.at(mass, np.searchsorted(points, sample.values), sample.weights)
    return mass / sample.total_weight


def _normalized_cdf(mass: np.ndarray) -> np.ndarray:
    # on the sorted support: F(x) = P(X < x) + P(X = x) / 2
    return np.cumsum(mass) - mass / 2.0


def _variance(F: np.ndarray, mass: np.ndarray, centre: float | None = None) -> float:
    """Variance of F(X) for X with the given point masses, as a centred sum.

    Exactly zero when F is constant on the support, which the uncentred
    form int F^2 dG - (int F dG)^2 only reaches up to rounding.
    """
    on = F[mass > 0]
    if on.max() == on.min():
        return 0.0
    if centre is None:
        centre = float(np.dot(mass, F))
    d = F - centre
    return float(np.dot(mass, d * d))


def _clip01(p: float) -> float:
    return min(max(p, 0.0), 1.0)


def estimands_by_integrals(
    f1: WeightedSample, f2: WeightedSample, mix: float | None = None
) -> Estimands:
    """Estimands by direct integration of normalized CDFs.

    ``mix`` is the share of group 1 in the pooled distribution that defines
    the null variance.  It defaults to the groups' weight shares, which is
    what pooling the ranks of unit-weight data amounts to.
    """
    points = np.unique(np.concatenate([f1.values, f2.values]))
    m1, m2 = _masses_on(points, f1), _masses_on(points, f2)
    F1, F2 = _normalized_cdf(m1), _normalized_cdf(m2)

    p = _clip01(float(np.dot(m2, F1)))
    s2_1 = _variance(F2, m1)
    s2_2 = _variance(F1, m2)

    W1, W2 = f1.total_weight, f2.total_weight
    if mix is None:
        mix = W1 / (W1 + W2)
    elif not 0 < mix < 1:
        raise ValueError(f"mixing share must lie in (0, 1), got {mix}")
    h = mix * m1 + (1.0 - mix) * m2
    s2_null = _variance(_normalized_cdf(h), h, centre=0.5)
    return Estimands(
        p_star=p,
        sigma2_null=_nonneg(s2_null),
        sigma2_1=_nonneg(s2_1),
        sigma2_2=_nonneg(s2_2),
        n1=W1,
        n2=W2,
    )


def balance_integrals(f1: WeightedSample, f2: WeightedSample) -> tuple[float, float]:
    """The two sides of the balanced-design condition.

    Returns ``(int F1^2 dF2, int (1 - F2)^2 dF1)``; they coincide exactly when
    sigma1 == sigma2.
    """
    points = np.unique(np.concatenate([f1.values, f2.values]))
    m1, m2 = _masses_on(points, f1), _masses_on(points, f2)
    F1, F2 = _normalized_cdf(m1), _normalized_cdf(m2)
    return float(np.dot(m2, F1 * F1)), float(np.dot(m1, (1.0 - F2) ** 2))
