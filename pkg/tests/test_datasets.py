import numpy as np
import pytest

from wmwplan.datasets import (
    EXAMPLE_NAMES,
    load_example,
    samples_equal,
    table_alternative,
)
from wmwplan.synthetic import WeightedSample


@pytest.mark.parametrize("name", ["seizures", "nasal", "kidney", "albumin"])
def test_generated_alternative_matches_stored_table(name):
    assert samples_equal(load_example(name).f2, table_alternative(name))


def test_seizures_shape():
    ex = load_example("seizures")
    assert len(ex.f1) == len(ex.f2) == 28
    assert ex.f1.values.max() == 29 and ex.f2.values.max() == 14
    assert ex.f1.values.min() == 0 and ex.f2.values.min() == 0


def test_nasal_counts():
    ex = load_example("nasal")
    assert ex.f1.total_weight == ex.f2.total_weight == 80
    np.testing.assert_array_equal(ex.f2.weights, [48, 25, 6, 1])


def test_defaults():
    assert load_example("albumin").power == 0.9
    for name in EXAMPLE_NAMES:
        assert load_example(name, m=100).alpha == 0.05
    assert load_example("kidney").power == 0.8


def test_beta_grid_size():
    ex = load_example("beta55_32", m=1000)
    assert len(ex.f1) == len(ex.f2) == 1000
    assert 0 < ex.f1.values.min() and ex.f2.values.max() < 1


def test_unknown_name_lists_choices():
    with pytest.raises(ValueError, match="seizures"):
        load_example("nope")
    with pytest.raises(ValueError):
        table_alternative("beta55_32")


def test_samples_equal_ignores_order():
    a = WeightedSample([1.0, 2.0, 3.0], [1, 2, 3])
    b = WeightedSample([3.0, 1.0, 2.0], [3, 1, 2])
    assert samples_equal(a, b)
    assert not samples_equal(a, WeightedSample([1.0, 2.0, 3.0], [1, 3, 2]))
    assert not samples_equal(a, WeightedSample([1.0, 2.0]))
