"""Sample-size planning for the Wilcoxon-Mann-Whitney test from synthetic data."""
from .datasets import EXAMPLE_NAMES, NamedExample, load_example
from .estimands import Estimands, estimands_by_integrals, estimands_by_ranks
from .planning import (
    AllocationInterval,
    PlanInput,
    PlanResult,
    allocation_interval,
    check_mirror_symmetry,
    minimize_t,
    noether_sample_size,
    normal_quantile,
    plan,
    sample_size_at_t,
)
from .powersim import PowerResult, simulate_power
from .ranking import RankSummary, midranks, rank_summary
from .synthetic import (
    WeightedSample,
    from_frequency_table,
    ordinal_shift,
    quantile_grid,
    scale_effect,
    shift_effect,
)
from .wmwtest import TestResult, wmw_asymptotic_test

__all__ = [
    "AllocationInterval", "EXAMPLE_NAMES", "Estimands", "NamedExample", "PlanInput",
    "PlanResult", "PowerResult", "RankSummary", "TestResult", "WeightedSample",
    "allocation_interval", "check_mirror_symmetry", "estimands_by_integrals",
    "estimands_by_ranks", "from_frequency_table", "load_example", "midranks",
    "minimize_t", "noether_sample_size", "normal_quantile", "ordinal_shift", "plan",
    "quantile_grid", "rank_summary", "sample_size_at_t", "scale_effect", "shift_effect",
    "simulate_power", "wmw_asymptotic_test",
]
