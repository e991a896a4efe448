"""Sample size N(t) for the WMW test and the allocation rate that minimizes it."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .estimands import Estimands, estimands_by_integrals
from .synthetic import WeightedSample

# Acklam's rational approximation to the normal quantile
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def normal_quantile(prob: float) -> float:
    """Inverse of the standard normal CDF.

    A rational approximation (relative error ~1e-9) followed by one Halley
    step against ``erfc``, which brings the error to the level of double
    rounding.
    """
    if not 0.0 < prob < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {prob}")
    if prob < _P_LOW:
        q = math.sqrt(-2.0 * math.log(prob))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    elif prob <= 1.0 - _P_LOW:
        q = prob - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
            ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
    else:
        q = math.sqrt(-2.0 * math.log1p(-prob))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    # Halley refinement; the upper tail is handled by symmetry for accuracy
    if prob > 0.5:
        return -_halley(1.0 - prob, -x)
    return _halley(prob, x)


def _halley(prob: float, x: float) -> float:
    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - prob
    u = e * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


@dataclass(frozen=True)
class PlanInput:
    """Error rates and allocation policy.

    ``allocation`` is ``"balanced"``, ``"optimal"`` or a fixed rate ``t`` in
    (0, 1) for the first group.  ``alpha`` is always two-sided.
    """

    alpha: float = 0.05
    power: float = 0.8
    allocation: str | float = "balanced"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 < self.power < 1:
            raise ValueError(f"power must lie in (0, 1), got {self.power}")
        a = self.allocation
        if isinstance(a, str):
            if a not in ("balanced", "optimal"):
                raise ValueError(f"unknown allocation policy {a!r}")
            if a == "optimal" and self.power <= 0.5:
                raise ValueError("optimal allocation needs power > 0.5")
        elif not 0 < float(a) < 1:
            raise ValueError(f"fixed allocation rate must lie in (0, 1), got {a}")

    @property
    def u_alpha(self) -> float:
        return normal_quantile(1.0 - self.alpha / 2.0)

    @property
    def u_beta(self) -> float:
        return normal_quantile(self.power)


@dataclass(frozen=True)
class AllocationInterval:
    lower: float
    upper: float
    kind: str

    def __contains__(self, t: float) -> bool:
        return self.lower <= t <= self.upper


@dataclass(frozen=True)
class PlanResult:
    t: float
    N_raw: float
    n1: int
    n2: int
    estimands: Estimands
    interval: AllocationInterval | None = None
    noether_n_per_group: int | None = None
    allocation: str | float = field(default="balanced")

    @property
    def N(self) -> int:
        return self.n1 + self.n2

    def as_dict(self) -> dict:
        d = dict(self.estimands.as_dict())
        d.update(
            t=self.t,
            N_raw=self.N_raw,
            n1=self.n1,
            n2=self.n2,
            N_total=self.N,
            interval_lower=None if self.interval is None else self.interval.lower,
            interval_upper=None if self.interval is None else self.interval.upper,
            interval_kind=None if self.interval is None else self.interval.kind,
            noether_n_per_group=self.noether_n_per_group,
            allocation=self.allocation,
        )
        return d


def _check_effect(p_star: float) -> None:
    if p_star == 0.5:
        raise ValueError("null effect: sample size undefined")


def _check_t(t: float) -> None:
    if not 0.0 < t < 1.0:
        raise ValueError(f"allocation rate must lie in (0, 1), got {t}")


def sample_size_at_t(e: Estimands, inp: PlanInput, t: float) -> float:
    """Unrounded total sample size needed at allocation rate ``t``."""
    _check_effect(e.p_star)
    _check_t(t)
    alt_sd = math.sqrt(t * e.sigma2_2 + (1.0 - t) * e.sigma2_1)
    num = (e.sigma_null * inp.u_alpha + inp.u_beta * alt_sd) ** 2
    return num / (t * (1.0 - t) * (e.p_star - 0.5) ** 2)


def noether_sample_size(p_star: float, inp: PlanInput, t: float = 0.5) -> float:
    """Noether's continuous-data approximation (null variance 1/12)."""
    _check_effect(p_star)
    _check_t(t)
    return (inp.u_alpha + inp.u_beta) ** 2 / (12.0 * t * (1.0 - t) * (p_star - 0.5) ** 2)


def _equal_variances(e: Estimands) -> bool:
    return math.isclose(e.sigma2_1, e.sigma2_2, rel_tol=1e-12, abs_tol=1e-15)


def allocation_interval(e: Estimands, inp: PlanInput) -> AllocationInterval:
    """Closed-form interval that contains the N-minimizing allocation rate."""
    if inp.power <= 0.5:
        raise ValueError("allocation interval needs power > 0.5")
    s1, s2 = e.sigma2_1, e.sigma2_2
    if s1 == 0.0 and s2 == 0.0:
        raise ValueError("allocation undetermined: both alternative variances are zero")
    if _equal_variances(e):
        return AllocationInterval(0.5, 0.5, "degenerate_half")

    ua, ub, sigma = inp.u_alpha, inp.u_beta, e.sigma_null
    c = ua * math.sqrt(e.p_star * (1.0 - e.p_star)) * sigma
    z = (c + ub * s1) * (c + ub * s2)
    i2 = math.sqrt(z) / (math.sqrt(z) + c + ub * s2)

    if s1 == 0.0:
        i1 = ua * sigma / (2.0 * ua * sigma + ub * e.sigma2)
        return AllocationInterval(i1, i2, "sigma1_zero")
    if s2 == 0.0:
        i1 = 1.0 - ua * sigma / (2.0 * ua * sigma + ub * e.sigma1)
        return AllocationInterval(i2, i1, "sigma2_zero")
    i1 = 1.0 / (e.kappa + 1.0)
    return AllocationInterval(min(i1, i2), max(i1, i2), "regular")


def _slope_numerator(e: Estimands, inp: PlanInput, t: float) -> float:
    # dN/dt has the sign of this expression on (0, 1) when power > 0.5
    s = e.sigma2_1 * (1.0 - t) + e.sigma2_2 * t
    return inp.u_alpha * e.sigma_null * (2.0 * t - 1.0) * math.sqrt(s) - inp.u_beta * (
        e.sigma2_1 * (1.0 - t) ** 2 - e.sigma2_2 * t * t
    )


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, lo: float, hi: float, xtol: float = 1e-8, maxiter: int = 200):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns the final bracket."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(maxiter):
        if hi - lo <= xtol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    return lo, hi


@dataclass(frozen=True)
class Optimum:
    t: float
    N_raw: float


_EDGE = 1e-6
_MARGIN = 0.05


def minimize_t(e: Estimands, inp: PlanInput) -> Optimum:
    """The allocation rate minimizing N(t) on (0, 1), to about 1e-12.

    Golden-section search over the analytic interval (widened by a margin)
    narrows the bracket; the minimizer is then polished as the single sign
    change of dN/dt inside it.
    """
    if inp.power <= 0.5:
        raise ValueError("minimization needs power > 0.5")
    _check_effect(e.p_star)
    if _equal_variances(e):
        return Optimum(0.5, sample_size_at_t(e, inp, 0.5))

    iv = allocation_interval(e, inp)
    lo = max(_EDGE, iv.lower - _MARGIN)
    hi = min(1.0 - _EDGE, iv.upper + _MARGIN)
    a, b = golden_section(lambda t: sample_size_at_t(e, inp, t), lo, hi, xtol=1e-6)

    slope = lambda t: _slope_numerator(e, inp, t)  # noqa: E731
    a, b = max(lo, a - 1e-6), min(hi, b + 1e-6)
    if slope(a) < 0.0 < slope(b):
        t0 = optimize.brentq(slope, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    elif slope(lo) < 0.0 < slope(hi):
        t0 = optimize.brentq(slope, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    else:
        t0 = 0.5 * (a + b)
    return Optimum(t0, sample_size_at_t(e, inp, t0))


def round_sizes(N_raw: float, t: float, balanced: bool = False) -> tuple[int, int]:
    """Per-group integer sizes; never below the unrounded requirement."""
    if balanced:
        n = math.ceil(N_raw / 2.0)
        return n, n
    return max(1, math.ceil(t * N_raw)), max(1, math.ceil((1.0 - t) * N_raw))


def plan_from_estimands(e: Estimands, inp: PlanInput) -> PlanResult:
    interval = None
    if inp.power > 0.5:
        try:
            interval = allocation_interval(e, inp)
        except ValueError:
            interval = None

    if inp.allocation == "balanced":
        t, N_raw = 0.5, sample_size_at_t(e, inp, 0.5)
    elif inp.allocation == "optimal":
        opt = minimize_t(e, inp)
        t, N_raw = opt.t, opt.N_raw
    else:
        t = float(inp.allocation)
        N_raw = sample_size_at_t(e, inp, t)
    n1, n2 = round_sizes(N_raw, t, balanced=inp.allocation == "balanced")
    noether = math.ceil(noether_sample_size(e.p_star, inp, 0.5) / 2.0)
    return PlanResult(
        t=t,
        N_raw=N_raw,
        n1=n1,
        n2=n2,
        estimands=e,
        interval=interval,
        noether_n_per_group=noether,
        allocation=inp.allocation,
    )


def plan(
    f1: WeightedSample, f2: WeightedSample, inp: PlanInput, mix: float | None = None
) -> PlanResult:
    """Estimands of ``(f1, f2)``, then N at the policy's allocation rate, rounded."""
    return plan_from_estimands(estimands_by_integrals(f1, f2, mix=mix), inp)


def check_mirror_symmetry(
    f1: WeightedSample, f2: WeightedSample, tol: float = 1e-9
) -> float | None:
    """Return ``a`` if ``P(X1 = x) == P(X2 = 2a - x)`` for all x, else None.

    ``a`` is the average of the two means.  A mirror pair has equal
    alternative variances, so the balanced design is optimal for it.
    """
    a = 0.5 * (f1.mean() + f2.mean())
    x1, m1 = f1.support()
    x2, m2 = f2.support()
    if x1.size != x2.size:
        return None
    # reflect f2 about a; sorted order reverses
    reflected = (2.0 * a - x2)[::-1]
    scale = max(1.0, float(np.max(np.abs(x1))), float(np.max(np.abs(x2))))
    if not np.allclose(x1, reflected, rtol=0.0, atol=tol * scale):
        return None
    if not np.allclose(m1, m2[::-1], rtol=0.0, atol=tol):
        return None
    return a
