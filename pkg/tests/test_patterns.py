# tests/test_patterns.py

import numpy as np
import pytest

from config import Settings
from core.errors import PatternCapExceededError
from core.patterns import WeavingPattern, map_patterns, plan_patterns, row_mask


def test_pattern_indices_and_bits():
    p = WeavingPattern.from_indices(4, [0, 2])
    assert p.mask == 5
    assert p.v_indices() == [0, 2]
    assert p.w_indices() == [1, 3]
    assert p.bitstring() == "1010"
    assert p.complement().mask == 10
    assert WeavingPattern.from_bits([1, 0, 1, 0]) == p


def test_full_and_empty():
    assert WeavingPattern.full(3).v_indices() == [0, 1, 2]
    assert WeavingPattern.empty(3).w_indices() == [0, 1, 2]
    assert WeavingPattern.full(0).mask == 0


@pytest.mark.parametrize("size, mask", [(2, 4), (3, -1), (-1, 0)])
def test_invalid_patterns(size, mask):
    with pytest.raises(ValueError):
        WeavingPattern(size, mask)


def test_row_mask():
    assert row_mask(np.array([1, 0, 1], dtype=np.int8)) == 5
    assert row_mask(np.zeros(3, dtype=np.int8)) == 0


def test_exhaustive_plan_is_blocked_independent_of_threads():
    plan = plan_patterns(5, Settings(chunk_size=7))
    chunks = plan.chunks(7)
    assert not plan.sampled
    assert plan.count == 32
    assert [c.shape[0] for c in chunks] == [7, 7, 7, 7, 4]
    masks = [row_mask(r) for c in chunks for r in c]
    assert masks == list(range(32))


def test_cap_and_sampling():
    with pytest.raises(PatternCapExceededError):
        plan_patterns(6, Settings(pattern_cap=4))
    plan = plan_patterns(6, Settings(pattern_cap=4, sample_count=20, sample_seed=3))
    again = plan_patterns(6, Settings(pattern_cap=4, sample_count=20, sample_seed=3))
    assert plan.sampled
    assert 1 <= plan.count <= 20
    np.testing.assert_array_equal(plan.rows, again.rows)


@pytest.mark.parametrize("threads", [1, 4])
def test_map_patterns_keeps_order(threads):
    out = map_patterns(lambda p: p.mask, 6, Settings(chunk_size=5, threads=threads))
    assert out == list(range(64))
