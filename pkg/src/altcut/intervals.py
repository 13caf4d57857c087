"""Half-open integer-millisecond intervals and disjoint-span set algebra.

All timing in the engine is expressed as ``[start_ms, end_ms)`` pairs of
non-negative integers on the source clock. Set operations take and return
*span lists*: sorted lists of disjoint, non-adjacent intervals. Integer
endpoints keep every operation exact, so results can be checked against a
per-millisecond bitmap oracle with zero tolerance.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass


class IntervalError(ValueError):
    """Raised for empty, inverted, or negative intervals."""


@dataclass(frozen=True, order=True)
class TimeInterval:
    """A half-open span ``[start_ms, end_ms)`` of integer milliseconds."""

    start_ms: int
    end_ms: int

    def __post_init__(self):
        if not isinstance(self.start_ms, int) or not isinstance(self.end_ms, int):
            raise IntervalError(f"interval endpoints must be integers, got {self!r}")
        if self.start_ms < 0:
            raise IntervalError(f"interval start must be >= 0, got {self.start_ms}")
        if self.start_ms >= self.end_ms:
            raise IntervalError(
                f"interval must be non-empty: [{self.start_ms}, {self.end_ms})"
            )

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms

    def contains(self, t_ms: int) -> bool:
        return self.start_ms <= t_ms < self.end_ms

    def overlaps(self, other: "TimeInterval") -> bool:
        return self.start_ms < other.end_ms and other.start_ms < self.end_ms

    def intersect(self, other: "TimeInterval") -> "TimeInterval | None":
        lo = max(self.start_ms, other.start_ms)
        hi = min(self.end_ms, other.end_ms)
        return TimeInterval(lo, hi) if lo < hi else None

    def to_pair(self) -> list[int]:
        return [self.start_ms, self.end_ms]


SpanList = list[TimeInterval]


def merge_spans(spans: list[TimeInterval]) -> SpanList:
    """Sort and coalesce overlapping or adjacent spans into canonical form."""
    if not spans:
        return []
    ordered = sorted(spans, key=lambda s: (s.start_ms, s.end_ms))
    out = [ordered[0]]
    for span in ordered[1:]:
        last = out[-1]
        if span.start_ms <= last.end_ms:
            if span.end_ms > last.end_ms:
                out[-1] = TimeInterval(last.start_ms, span.end_ms)
        else:
            out.append(span)
    return out


def is_canonical(spans: list[TimeInterval]) -> bool:
    """True if spans are sorted, disjoint, and non-adjacent."""
    return all(a.end_ms < b.start_ms for a, b in zip(spans, spans[1:]))


def total_ms(spans: list[TimeInterval]) -> int:
    return sum(s.duration_ms for s in spans)


def intersect_spans(a: list[TimeInterval], b: list[TimeInterval]) -> SpanList:
    """Intersection of two span sets; inputs need not be canonical."""
    xs, ys = merge_spans(a), merge_spans(b)
    out: SpanList = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        hit = xs[i].intersect(ys[j])
        if hit is not None:
            out.append(hit)
        if xs[i].end_ms <= ys[j].end_ms:
            i += 1
        else:
            j += 1
    return out


def subtract_spans(a: list[TimeInterval], b: list[TimeInterval]) -> SpanList:
    """Span set of every millisecond in ``a`` but not in ``b``."""
    xs, ys = merge_spans(a), merge_spans(b)
    out: SpanList = []
    j = 0
    for x in xs:
        cursor = x.start_ms
        while j < len(ys) and ys[j].end_ms <= cursor:
            j += 1
        k = j
        while k < len(ys) and ys[k].start_ms < x.end_ms:
            if ys[k].start_ms > cursor:
                out.append(TimeInterval(cursor, ys[k].start_ms))
            cursor = max(cursor, ys[k].end_ms)
            if cursor >= x.end_ms:
                break
            k += 1
        if cursor < x.end_ms:
            out.append(TimeInterval(cursor, x.end_ms))
    return out


def union_spans(a: list[TimeInterval], b: list[TimeInterval]) -> SpanList:
    return merge_spans(list(a) + list(b))


def clip_spans(spans: list[TimeInterval], bound: TimeInterval) -> SpanList:
    """Clamp spans to ``bound``, dropping anything fully outside."""
    return intersect_spans(spans, [bound])


def covered_within(spans: list[TimeInterval], window: TimeInterval) -> int:
    """Exact count of covered milliseconds inside ``window``."""
    return total_ms(intersect_spans(spans, [window]))


def jaccard_distance(a: list[TimeInterval], b: list[TimeInterval]) -> float:
    """1 - |A∩B| / |A∪B| over covered milliseconds; 0.0 for two empty sets."""
    union = total_ms(union_spans(a, b))
    if union == 0:
        return 0.0
    inter = total_ms(intersect_spans(a, b))
    return 1.0 - inter / union


def snap_to_grid(t_ms: int, grid: list[int]) -> int:
    """Nearest grid value to ``t_ms``; ties resolve to the smaller value.

    ``grid`` must be sorted ascending and non-empty.
    """
    if not grid:
        raise IntervalError("cannot snap to an empty grid")
    i = bisect.bisect_left(grid, t_ms)
    if i == 0:
        return grid[0]
    if i == len(grid):
        return grid[-1]
    before, after = grid[i - 1], grid[i]
    return before if t_ms - before <= after - t_ms else after
