import numpy as np
import pytest

from src.workers import map_row_ranges, row_ranges


def test_row_ranges():
    assert row_ranges(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert row_ranges(0, 4) == []
    with pytest.raises(ValueError):
        row_ranges(10, 0)


@pytest.mark.parametrize("workers", [1, 2])
def test_array_results_keep_range_order(workers):
    out = map_row_ranges(np.arange, 1000, workers=workers, chunk=37)
    assert np.array_equal(out, np.arange(1000))


def test_list_results_are_flattened():
    assert map_row_ranges(range, 7, chunk=3) == list(range(7))
    assert map_row_ranges(range, 0) == []
