"""Edited-clock <-> source-clock mappings for rough cuts.

A rough cut's edited timeline is the concatenation of its source spans, so
the mapping between clocks is a piecewise isometry: each span becomes one
piece with identical duration on both clocks, and edited pieces tile
``[0, edited_duration)`` with no gaps.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from altcut.intervals import TimeInterval
from altcut.model import RoughCut


class MappingError(ValueError):
    pass


@dataclass(frozen=True)
class MappingPiece:
    edited: TimeInterval
    source: TimeInterval

    def to_dict(self) -> dict:
        return {"edited": self.edited.to_pair(), "source": self.source.to_pair()}


@dataclass(frozen=True)
class TimelineMapping:
    pieces: tuple[MappingPiece, ...]

    @property
    def edited_duration_ms(self) -> int:
        return self.pieces[-1].edited.end_ms if self.pieces else 0

    def to_dict(self) -> dict:
        return {
            "pieces": [p.to_dict() for p in self.pieces],
            "edited_duration_ms": self.edited_duration_ms,
        }


def build_mapping(rough_cut: RoughCut) -> TimelineMapping:
    """Lay the cut's spans end to end on the edited clock."""
    spans = rough_cut.spans
    for a, b in zip(spans, spans[1:]):
        if b.start_ms < a.end_ms:
            raise MappingError(
                f"rough cut spans overlap or are out of order: "
                f"[{a.start_ms},{a.end_ms}) then [{b.start_ms},{b.end_ms})"
            )
    pieces = []
    cursor = 0
    for span in spans:
        edited = TimeInterval(cursor, cursor + span.duration_ms)
        pieces.append(MappingPiece(edited, span))
        cursor = edited.end_ms
    return TimelineMapping(tuple(pieces))


def edited_to_source(mapping: TimelineMapping, t_edited: int) -> int:
    """Translate an edited-clock time to the source clock."""
    if not 0 <= t_edited < mapping.edited_duration_ms:
        raise MappingError(
            f"edited time {t_edited} outside [0,{mapping.edited_duration_ms})"
        )
    starts = [p.edited.start_ms for p in mapping.pieces]
    piece = mapping.pieces[bisect.bisect_right(starts, t_edited) - 1]
    return piece.source.start_ms + (t_edited - piece.edited.start_ms)


def source_to_edited(mapping: TimelineMapping, t_source: int) -> int | None:
    """Translate a source-clock time; None when that moment was cut out."""
    if t_source < 0:
        raise MappingError(f"source time {t_source} is negative")
    for piece in mapping.pieces:
        if piece.source.contains(t_source):
            return piece.edited.start_ms + (t_source - piece.source.start_ms)
    return None


def map_span_to_edited(mapping: TimelineMapping, span: TimeInterval) -> list[TimeInterval]:
    """Edited-clock images of a source span, merged where pieces abut."""
    out: list[TimeInterval] = []
    for piece in mapping.pieces:
        hit = piece.source.intersect(span)
        if hit is None:
            continue
        offset = piece.edited.start_ms - piece.source.start_ms
        mapped = TimeInterval(hit.start_ms + offset, hit.end_ms + offset)
        if out and out[-1].end_ms == mapped.start_ms:
            out[-1] = TimeInterval(out[-1].start_ms, mapped.end_ms)
        else:
            out.append(mapped)
    return out
