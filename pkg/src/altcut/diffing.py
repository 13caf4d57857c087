"""Variation comparison: coverage matrices, pairwise diffs, inclusion states.

Everything here is computed on the source clock with exact integer
milliseconds; on short sources the results match a per-millisecond bitmap
oracle with zero tolerance. All outputs serialize to canonical JSON so
golden-file comparisons are bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from altcut.intervals import (
    TimeInterval,
    intersect_spans,
    merge_spans,
    subtract_spans,
    total_ms,
)
from altcut.model import Project, RoughCut, Section, Transcript, Variation


class DiffError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Coverage


@dataclass(frozen=True)
class CoverageCell:
    covered_ms: int
    fraction: float

    def to_dict(self) -> dict:
        return {"covered_ms": self.covered_ms, "fraction": self.fraction}


@dataclass(frozen=True)
class CoverageMatrix:
    variation_ids: tuple[str, ...]
    section_ids: tuple[str, ...]
    cells: dict[str, dict[str, CoverageCell]]  # variation id -> section id -> cell

    def cell(self, variation_id: str, section_id: str) -> CoverageCell:
        return self.cells[variation_id][section_id]

    def to_dict(self) -> dict:
        return {
            "variations": list(self.variation_ids),
            "sections": list(self.section_ids),
            "cells": {
                vid: {sid: cell.to_dict() for sid, cell in row.items()}
                for vid, row in self.cells.items()
            },
        }


def coverage_by_section(spans: Sequence[TimeInterval], sections: Sequence[Section]) -> dict[str, int]:
    """Exact covered milliseconds of each section."""
    canonical = merge_spans(list(spans))
    return {
        sec.id: total_ms(intersect_spans(canonical, [sec.interval]))
        for sec in sections
    }


def section_coverage(
    variations: Sequence[Variation], sections: Sequence[Section]
) -> CoverageMatrix:
    """Coverage matrix over rough-cut variations (rows) and sections (cols)."""
    cells: dict[str, dict[str, CoverageCell]] = {}
    for v in variations:
        covered = coverage_by_section(v.rough_cut.spans, sections)
        cells[v.id] = {
            sec.id: CoverageCell(
                covered[sec.id], covered[sec.id] / sec.interval.duration_ms
            )
            for sec in sections
        }
    return CoverageMatrix(
        tuple(v.id for v in variations), tuple(s.id for s in sections), cells
    )


# ---------------------------------------------------------------------------
# Diff reports


@dataclass(frozen=True)
class MovedEffect:
    keyword: str
    from_sentence: int
    to_sentence: int

    def to_dict(self) -> dict:
        return {
            "keyword": self.keyword,
            "from_sentence": self.from_sentence,
            "to_sentence": self.to_sentence,
        }


@dataclass(frozen=True)
class RestyledEffect:
    sentence_index: int
    keyword: str
    from_value: str
    to_value: str

    def to_dict(self) -> dict:
        return {
            "sentence_index": self.sentence_index,
            "keyword": self.keyword,
            "from": self.from_value,
            "to": self.to_value,
        }


@dataclass(frozen=True)
class EffectDelta:
    added: tuple = ()
    removed: tuple = ()
    moved: tuple[MovedEffect, ...] = ()
    restyled: tuple[RestyledEffect, ...] = ()

    def __len__(self) -> int:
        return len(self.added) + len(self.removed) + len(self.moved) + len(self.restyled)

    def to_dict(self) -> dict:
        return {
            "added": [p.to_dict() for p in self.added],
            "removed": [p.to_dict() for p in self.removed],
            "moved": [m.to_dict() for m in self.moved],
            "restyled": [r.to_dict() for r in self.restyled],
        }


@dataclass(frozen=True)
class DiffReport:
    only_in_a: tuple[TimeInterval, ...] = ()
    only_in_b: tuple[TimeInterval, ...] = ()
    shared: tuple[TimeInterval, ...] = ()
    per_section_delta: dict[str, int] = field(default_factory=dict)  # a minus b
    effect_delta: EffectDelta = EffectDelta()

    def to_dict(self) -> dict:
        return {
            "only_in_a": [s.to_pair() for s in self.only_in_a],
            "only_in_b": [s.to_pair() for s in self.only_in_b],
            "shared": [s.to_pair() for s in self.shared],
            "per_section_delta": dict(self.per_section_delta),
            "effect_delta": self.effect_delta.to_dict(),
        }


def diff_rough_cuts(a: RoughCut, b: RoughCut, sections: Sequence[Section]) -> DiffReport:
    """Span-set algebra on the source clock plus per-section coverage deltas."""
    spans_a, spans_b = list(a.spans), list(b.spans)
    cov_a = coverage_by_section(spans_a, sections)
    cov_b = coverage_by_section(spans_b, sections)
    return DiffReport(
        only_in_a=tuple(subtract_spans(spans_a, spans_b)),
        only_in_b=tuple(subtract_spans(spans_b, spans_a)),
        shared=tuple(intersect_spans(spans_a, spans_b)),
        per_section_delta={
            sec.id: cov_a[sec.id] - cov_b[sec.id] for sec in sections
        },
    )


def _style_of(placement) -> str:
    return getattr(placement, "media_type", None) or placement.style


def diff_effects(a: Variation, b: Variation, project: Project | None = None) -> DiffReport:
    """Placement diff keyed by (sentence_index, keyword).

    Same key with a different style/media is a restyle; the same keyword at a
    different sentence is a move; everything else is an add or a remove.
    """
    if a.stage != b.stage or a.stage == "rough_cut":
        raise DiffError(f"effect diff needs two variations of one effect stage, "
                        f"got {a.stage} vs {b.stage}")
    if project is not None:
        anc_a = project.rough_cut_ancestor(a)
        anc_b = project.rough_cut_ancestor(b)
        if anc_a is None or anc_b is None or anc_a.id != anc_b.id:
            raise DiffError(
                "variations have different rough-cut ancestors; their edited "
                "clocks are not comparable"
            )

    map_a = {p.key: p for p in a.payload}
    map_b = {p.key: p for p in b.payload}
    restyled = []
    for key in map_a.keys() & map_b.keys():
        if _style_of(map_a[key]) != _style_of(map_b[key]):
            restyled.append(
                RestyledEffect(key[0], key[1], _style_of(map_a[key]), _style_of(map_b[key]))
            )
    rest_a = [p for p in a.payload if p.key not in map_b]
    rest_b = [p for p in b.payload if p.key not in map_a]

    moved = []
    removed = []
    added = []
    by_kw_a: dict[str, list] = {}
    by_kw_b: dict[str, list] = {}
    for p in rest_a:
        by_kw_a.setdefault(p.keyword, []).append(p)
    for p in rest_b:
        by_kw_b.setdefault(p.keyword, []).append(p)
    for kw in sorted(by_kw_a.keys() | by_kw_b.keys()):
        lhs = sorted(by_kw_a.get(kw, []), key=lambda p: p.sentence_index)
        rhs = sorted(by_kw_b.get(kw, []), key=lambda p: p.sentence_index)
        for pa, pb in zip(lhs, rhs):
            moved.append(MovedEffect(kw, pa.sentence_index, pb.sentence_index))
        removed.extend(lhs[len(rhs):])
        added.extend(rhs[len(lhs):])

    def placement_order(p):
        return (p.sentence_index, p.keyword)

    return DiffReport(
        effect_delta=EffectDelta(
            added=tuple(sorted(added, key=placement_order)),
            removed=tuple(sorted(removed, key=placement_order)),
            moved=tuple(sorted(moved, key=lambda m: (m.from_sentence, m.keyword))),
            restyled=tuple(sorted(restyled, key=lambda r: (r.sentence_index, r.keyword))),
        )
    )


# ---------------------------------------------------------------------------
# Inclusion matrix


@dataclass(frozen=True)
class InclusionMatrix:
    variation_ids: tuple[str, ...]
    sentence_count: int
    cells: dict[str, tuple[str, ...]]  # variation id -> per-sentence tri-state

    def state(self, variation_id: str, sentence_index: int) -> str:
        return self.cells[variation_id][sentence_index]

    def to_dict(self) -> dict:
        return {
            "variations": list(self.variation_ids),
            "sentence_count": self.sentence_count,
            "cells": {vid: list(states) for vid, states in self.cells.items()},
        }


def sentence_inclusion(spans: Sequence[TimeInterval], transcript: Transcript) -> tuple[str, ...]:
    canonical = merge_spans(list(spans))
    states = []
    for s in transcript.sentences:
        covered = total_ms(intersect_spans(canonical, [s.interval]))
        if covered == 0:
            states.append("excluded")
        elif covered == s.interval.duration_ms:
            states.append("full")
        else:
            states.append("partial")
    return tuple(states)


def inclusion_matrix(
    variations: Sequence[Variation], transcript: Transcript
) -> InclusionMatrix:
    """Per-variation, per-sentence membership: full, partial, or excluded."""
    cells = {
        v.id: sentence_inclusion(v.rough_cut.spans, transcript) for v in variations
    }
    return InclusionMatrix(
        tuple(v.id for v in variations), len(transcript.sentences), cells
    )
