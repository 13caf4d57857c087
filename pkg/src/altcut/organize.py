"""Variation ordering: sort keys per stage plus pin/archive strata.

Output order is always pinned first (most recently pinned on top), then
normal variations in key order, then archived last. Within the normal
stratum ties fall back to variation id, so a sort is a deterministic
permutation of its input.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from altcut.model import MEDIA_TYPES, TEXT_STYLES, Section, Variation

VALID_KEYS = {
    "rough_cut": ("duration", "section_count"),
    "broll": ("effect_count", "media_type"),
    "text_effects": ("effect_count", "style"),
}
DEFAULT_KEYS = {
    "rough_cut": "duration",
    "broll": "effect_count",
    "text_effects": "effect_count",
}


class OrganizeError(ValueError):
    pass


@dataclass(frozen=True)
class SortKey:
    field: str
    direction: str = "asc"

    def __post_init__(self):
        if self.direction not in ("asc", "desc"):
            raise OrganizeError(f"unknown sort direction {self.direction!r}")


def _id_order(variation_id: str):
    digits = "".join(c for c in variation_id if c.isdigit())
    return (int(digits) if digits else 0, variation_id)


def _modal_index(values: Sequence[str], order: Sequence[str]) -> int:
    """Categorical rank of the most common value; ties pick the earlier
    category in the declared order."""
    if not values:
        return len(order)
    counts = Counter(values)
    best = max(order, key=lambda v: (counts.get(v, 0), -order.index(v)))
    return order.index(best)


def sort_metric(variation: Variation, field: str, sections: Optional[Sequence[Section]]):
    if field == "duration":
        return variation.rough_cut.edited_duration_ms
    if field == "section_count":
        if sections is None:
            raise OrganizeError("section_count sort needs the project sections")
        from altcut.diffing import coverage_by_section

        covered = coverage_by_section(variation.rough_cut.spans, sections)
        return sum(1 for ms in covered.values() if ms > 0)
    if field == "effect_count":
        return len(variation.placements)
    if field == "media_type":
        return _modal_index([p.media_type for p in variation.placements], MEDIA_TYPES)
    if field == "style":
        return _modal_index([p.style for p in variation.placements], TEXT_STYLES)
    raise OrganizeError(f"unknown sort field {field!r}")


def sort_variations(
    variations: Sequence[Variation],
    key: SortKey,
    sections: Optional[Sequence[Section]] = None,
) -> list[str]:
    """Ordered variation ids: pinned stratum, keyed normal stratum, archived."""
    stages = {v.stage for v in variations}
    for stage in stages:
        if key.field not in VALID_KEYS[stage]:
            raise OrganizeError(
                f"sort key {key.field!r} is not valid for stage {stage}"
            )

    pinned = [v for v in variations if v.status == "pinned"]
    normal = [v for v in variations if v.status == "normal"]
    archived = [v for v in variations if v.status == "archived"]

    pinned.sort(key=lambda v: (-v.status_seq, _id_order(v.id)))
    normal.sort(key=lambda v: _id_order(v.id))
    normal.sort(
        key=lambda v: sort_metric(v, key.field, sections),
        reverse=key.direction == "desc",
    )
    return [v.id for v in pinned + normal + archived]


def default_sort_key(stage: str) -> SortKey:
    return SortKey(DEFAULT_KEYS[stage])


def outline(
    project_variations: Sequence[Variation],
    stage: str,
    sections: Optional[Sequence[Section]] = None,
) -> list[str]:
    """Default outline ordering for a stage, as shown in the versions list."""
    stage_variations = [v for v in project_variations if v.stage == stage]
    if not stage_variations:
        return []
    return sort_variations(stage_variations, default_sort_key(stage), sections)
