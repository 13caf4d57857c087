"""Interval algebra against the per-millisecond bitmap oracle."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altcut.intervals import (
    IntervalError,
    TimeInterval,
    covered_within,
    intersect_spans,
    is_canonical,
    jaccard_distance,
    merge_spans,
    snap_to_grid,
    subtract_spans,
    total_ms,
    union_spans,
)
from oracles import bitmap, nearest_grid_value, runs

DURATION = 5_000


def spans_strategy():
    pair = st.tuples(
        st.integers(0, DURATION - 1), st.integers(1, DURATION)
    ).filter(lambda p: p[0] < p[1])
    return st.lists(pair, max_size=8).map(
        lambda pairs: [TimeInterval(a, b) for a, b in pairs]
    )


def as_pairs(spans):
    return [(s.start_ms, s.end_ms) for s in spans]


class TestTimeInterval:
    def test_rejects_inverted(self):
        with pytest.raises(IntervalError):
            TimeInterval(10, 10)
        with pytest.raises(IntervalError):
            TimeInterval(10, 5)

    def test_rejects_negative(self):
        with pytest.raises(IntervalError):
            TimeInterval(-1, 5)

    def test_duration(self):
        assert TimeInterval(100, 350).duration_ms == 250

    def test_contains_half_open(self):
        span = TimeInterval(10, 20)
        assert span.contains(10)
        assert span.contains(19)
        assert not span.contains(20)

    def test_intersect(self):
        assert TimeInterval(0, 10).intersect(TimeInterval(5, 15)) == TimeInterval(5, 10)
        assert TimeInterval(0, 10).intersect(TimeInterval(10, 15)) is None


class TestAlgebra:
    @given(spans_strategy())
    @settings(max_examples=200)
    def test_merge_matches_bitmap(self, spans):
        merged = merge_spans(spans)
        assert is_canonical(merged)
        assert as_pairs(merged) == runs(bitmap(as_pairs(spans), DURATION))

    @given(spans_strategy(), spans_strategy())
    @settings(max_examples=200)
    def test_set_ops_match_bitmap(self, a, b):
        mask_a = bitmap(as_pairs(a), DURATION)
        mask_b = bitmap(as_pairs(b), DURATION)
        assert as_pairs(intersect_spans(a, b)) == runs(mask_a & mask_b)
        assert as_pairs(subtract_spans(a, b)) == runs(mask_a & ~mask_b)
        assert as_pairs(union_spans(a, b)) == runs(mask_a | mask_b)

    @given(spans_strategy(), spans_strategy())
    @settings(max_examples=200)
    def test_totals_and_jaccard(self, a, b):
        mask_a = bitmap(as_pairs(a), DURATION)
        mask_b = bitmap(as_pairs(b), DURATION)
        assert total_ms(merge_spans(a)) == int(mask_a.sum())
        union = int((mask_a | mask_b).sum())
        inter = int((mask_a & mask_b).sum())
        expected = 0.0 if union == 0 else 1.0 - inter / union
        assert jaccard_distance(a, b) == expected

    def test_covered_within(self):
        spans = [TimeInterval(5_000, 15_000), TimeInterval(40_000, 50_000)]
        assert covered_within(spans, TimeInterval(0, 10_000)) == 5_000
        assert covered_within(spans, TimeInterval(20_000, 30_000)) == 0

    def test_merge_coalesces_adjacent(self):
        merged = merge_spans([TimeInterval(0, 5), TimeInterval(5, 9)])
        assert merged == [TimeInterval(0, 9)]


class TestSnap:
    @given(st.integers(0, DURATION), st.lists(st.integers(0, DURATION), min_size=1, max_size=20))
    @settings(max_examples=200)
    def test_matches_linear_scan(self, t, raw_grid):
        grid = sorted(set(raw_grid))
        assert snap_to_grid(t, grid) == nearest_grid_value(grid, t)

    def test_tie_prefers_smaller(self):
        assert snap_to_grid(15, [10, 20]) == 10

    def test_empty_grid_rejected(self):
        with pytest.raises(IntervalError):
            snap_to_grid(5, [])
