import itertools

import numpy as np
import pytest
from hypothesis import strategies as st
from scipy import stats

from wmwplan.synthetic import WeightedSample
from wmwplan.wmwtest import wmw_asymptotic_test

# small integer supports make ties the rule rather than the exception
small_ints = st.integers(min_value=-4, max_value=6)
int_lists = st.lists(small_ints, min_size=1, max_size=15)
real_lists = st.lists(
    st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=15,
)


@st.composite
def weighted_samples(draw, max_support=6):
    values = draw(st.lists(small_ints, min_size=1, max_size=max_support))
    weights = draw(
        st.lists(
            st.floats(min_value=0.05, max_value=20.0),
            min_size=len(values),
            max_size=len(values),
        )
    )
    return WeightedSample(values, weights)


def random_weighted_pair(rng: np.random.Generator, max_support: int = 6):
    """Random pair of discrete weighted samples over a small shared grid."""
    def one():
        k = int(rng.integers(1, max_support + 1))
        values = rng.integers(-4, 7, size=k).astype(float)
        weights = rng.uniform(0.05, 5.0, size=k)
        return WeightedSample(values, weights)

    return one(), one()


def brute_force_ncdf(values, weights, x):
    """Normalized CDF by direct comparison against every point mass."""
    values = np.asarray(values, float)
    weights = np.asarray(weights, float)
    return float(np.sum(weights * ((values < x) + 0.5 * (values == x))) / np.sum(weights))


def brute_force_estimands(f1: WeightedSample, f2: WeightedSample):
    """(p, sigma1^2, sigma2^2) from pairwise comparisons and explicit variances."""
    w1, w2 = f1.probabilities, f2.probabilities
    F2_at_1 = np.array([brute_force_ncdf(f2.values, f2.weights, x) for x in f1.values])
    F1_at_2 = np.array([brute_force_ncdf(f1.values, f1.weights, x) for x in f2.values])
    p = float(np.sum(w2 * F1_at_2))
    s1 = float(np.sum(w1 * (F2_at_1 - np.sum(w1 * F2_at_1)) ** 2))
    s2 = float(np.sum(w2 * (F1_at_2 - p) ** 2))
    return p, s1, s2


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def grid_argmin(e, inp, step=1e-4):
    """Brute-force minimizer of N(t) on a grid, from scipy's normal quantiles."""
    ua, ub = stats.norm.ppf(1 - inp.alpha / 2), stats.norm.ppf(inp.power)
    t = np.arange(step, 1.0, step)
    alt = np.sqrt(t * e.sigma2_2 + (1 - t) * e.sigma2_1)
    n = (np.sqrt(e.sigma2_null) * ua + ub * alt) ** 2 / (t * (1 - t) * (e.p_star - 0.5) ** 2)
    return t[np.argmin(n)]


def permutation_table(pooled, n1):
    """Every split of ``pooled`` into groups of n1 and N - n1, exhaustively.

    Returns the asymptotic |z| and the exact two-sided permutation p-value of
    the rank-mean difference for each split.
    """
    pooled = list(pooled)
    N = len(pooled)
    splits = list(itertools.combinations(range(N), n1))
    ranks = stats.rankdata(pooled)
    diffs, zs = [], []
    for idx in splits:
        rest = [i for i in range(N) if i not in idx]
        g1 = [pooled[i] for i in idx]
        g2 = [pooled[i] for i in rest]
        diffs.append(abs(np.mean(ranks[rest]) - np.mean(ranks[list(idx)])))
        zs.append(abs(wmw_asymptotic_test(g1, g2).statistic))
    diffs = np.round(np.array(diffs), 12)
    perm_p = np.array([np.mean(diffs >= d) for d in diffs])
    return np.array(zs), perm_p


# one line per acceptance criterion, repeated after the test summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
