"""Worked examples: prior data for the reference group and the relevant alternative.

The ``*_TABLE`` constants are the alternatives stored as data, kept verbatim so
that tests can check them against what the effect generators produce.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .synthetic import (
    WeightedSample,
    beta_ppf,
    from_frequency_table,
    ordinal_shift,
    quantile_grid,
    scale_effect,
    shift_effect,
)

# placebo arm of an epilepsy trial, seizure counts of 28 subjects
SEIZURES_PLACEBO = (
    3, 3, 5, 4, 21, 7, 2, 12, 5, 0, 22, 4, 2, 12,
    9, 5, 3, 29, 5, 7, 4, 4, 5, 8, 25, 1, 2, 12,
)
SEIZURES_ALTERNATIVE_TABLE = (
    1, 1, 2, 2, 10, 3, 1, 6, 2, 0, 11, 2, 1, 6,
    4, 2, 1, 14, 2, 3, 2, 2, 2, 4, 12, 0, 1, 6,
)

# defect scores 0..3 of the nasal mucosa, counts after 4x augmentation
NASAL_SCORES = (0, 1, 2, 3)
NASAL_SUBSTANCE1 = (64, 12, 4, 0)
NASAL_SUBSTANCE2_TABLE = (48, 25, 6, 1)

# relative kidney weights (per mille), male Wistar rats
KIDNEY_PLACEBO = (6.62, 6.65, 5.78, 5.63, 6.05, 6.48, 5.50, 5.37)
KIDNEY_TREATMENT_TABLE = (6.92, 6.95, 6.08, 5.93, 6.35, 6.78, 5.80, 5.67)

# albuminuria: normal, micro, macro
ALBUMIN_LEVELS = ("normal", "micro", "macro")
ALBUMIN_CONTROL = (0.85, 0.10, 0.05)
ALBUMIN_EXPERIMENTAL = (0.90, 0.075, 0.025)


@dataclass(frozen=True)
class NamedExample:
    name: str
    f1: WeightedSample
    f2: WeightedSample
    alpha: float = 0.05
    power: float = 0.8
    description: str = ""


def _seizures(**_) -> NamedExample:
    f1 = WeightedSample(SEIZURES_PLACEBO)
    return NamedExample(
        "seizures",
        f1,
        scale_effect(f1, 0.5, integer_floor=True),
        description="seizure counts; alternative halves every count (rounded down)",
    )


def _nasal(**_) -> NamedExample:
    moved = ordinal_shift(NASAL_SUBSTANCE1, 0.25, "up", categories=(0, 1, 2))
    return NamedExample(
        "nasal",
        from_frequency_table(NASAL_SCORES, NASAL_SUBSTANCE1),
        from_frequency_table(NASAL_SCORES, moved),
        description="defect scores 0-3; 25% of rats in scores 0-2 worsen by one",
    )


def _kidney(**_) -> NamedExample:
    f1 = WeightedSample(KIDNEY_PLACEBO)
    return NamedExample(
        "kidney",
        f1,
        shift_effect(f1, 0.05 * f1.mean(), round_decimals=2),
        description="relative kidney weights; shift by 5% of the placebo mean",
    )


def _albumin(**_) -> NamedExample:
    return NamedExample(
        "albumin",
        from_frequency_table(ALBUMIN_LEVELS, ALBUMIN_CONTROL),
        from_frequency_table(ALBUMIN_LEVELS, ALBUMIN_EXPERIMENTAL),
        power=0.9,
        description="albuminuria level probabilities, control vs experimental",
    )


def _beta55_32(m: int = 100_000, **_) -> NamedExample:
    return NamedExample(
        "beta55_32",
        quantile_grid(beta_ppf(5, 5), m),
        quantile_grid(beta_ppf(3, 2), m),
        description=f"Beta(5,5) vs Beta(3,2) on a {m}-point quantile grid",
    )


_BUILDERS = {
    "seizures": _seizures,
    "nasal": _nasal,
    "kidney": _kidney,
    "albumin": _albumin,
    "beta55_32": _beta55_32,
}

EXAMPLE_NAMES = tuple(_BUILDERS)


def load_example(name: str, m: int = 100_000) -> NamedExample:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(
            f"unknown example {name!r}; valid names: {', '.join(EXAMPLE_NAMES)}"
        ) from None
    return builder(m=m)


def table_alternative(name: str) -> WeightedSample:
    """The stored alternative arm (not for beta55_32)."""
    if name == "seizures":
        return WeightedSample(SEIZURES_ALTERNATIVE_TABLE)
    if name == "nasal":
        return from_frequency_table(NASAL_SCORES, NASAL_SUBSTANCE2_TABLE)
    if name == "kidney":
        return WeightedSample(KIDNEY_TREATMENT_TABLE)
    if name == "albumin":
        return from_frequency_table(ALBUMIN_LEVELS, ALBUMIN_EXPERIMENTAL)
    raise ValueError(f"no stored alternative for {name!r}")


def samples_equal(a: WeightedSample, b: WeightedSample) -> bool:
    """Same values and weights up to reordering of the point masses."""
    if len(a) != len(b):
        return False
    ia, ib = np.lexsort((a.weights, a.values)), np.lexsort((b.weights, b.values))
    return bool(
        np.allclose(a.values[ia], b.values[ib], rtol=0, atol=1e-12)
        and np.allclose(a.weights[ia], b.weights[ib], rtol=0, atol=1e-12)
    )
