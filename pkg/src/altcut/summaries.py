"""Template-rendered change summaries.

Every line is generated from the structured diff, never free prose and never
a model output, so a summary can always be trusted against the data it
describes: one line per nonzero per-section delta or effect-delta entry, in
section order then effect kind order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from altcut.diffing import DiffReport, coverage_by_section, diff_effects, diff_rough_cuts
from altcut.model import Section, Variation

NO_CHANGES = "No changes"


@dataclass(frozen=True)
class ChangeSummary:
    lines: tuple[str, ...]
    structured: DiffReport

    @property
    def no_changes(self) -> bool:
        return self.lines == (NO_CHANGES,)

    def to_dict(self) -> dict:
        return {"lines": list(self.lines), "structured": self.structured.to_dict()}


def round_seconds(ms: int) -> int:
    """Milliseconds to nearest second, ties away from zero."""
    sign = 1 if ms >= 0 else -1
    return sign * ((abs(ms) + 500) // 1000)


def _seconds_label(ms: int) -> str:
    seconds = round_seconds(abs(ms))
    return f"{seconds}s" if seconds > 0 else "<1s"


def _effect_noun(stage: str, styled: str) -> str:
    if stage == "broll":
        return f"{styled} B-roll"
    return f"{styled.replace('_', '-')} text effect"


def _effect_kind(stage: str) -> str:
    return "B-roll" if stage == "broll" else "text effect"


def _section_lines(
    report: DiffReport, old: Variation, new: Variation, sections: Sequence[Section]
) -> list[str]:
    lines = []
    old_cov = coverage_by_section(old.rough_cut.spans, sections)
    new_cov = coverage_by_section(new.rough_cut.spans, sections)
    for sec in sections:
        delta = report.per_section_delta.get(sec.id, 0)
        if delta == 0:
            continue
        before, after = old_cov[sec.id], new_cov[sec.id]
        if after == 0:
            lines.append(f"Removed '{sec.title}'")
        elif before == 0:
            lines.append(f"Added '{sec.title}' ({_seconds_label(after)})")
        elif after < before:
            lines.append(f"Shortened '{sec.title}' by {_seconds_label(before - after)}")
        else:
            lines.append(f"Extended '{sec.title}' by {_seconds_label(after - before)}")
    return lines


def _effect_lines(report: DiffReport, stage: str) -> list[str]:
    delta = report.effect_delta
    lines = []
    for p in delta.added:
        styled = getattr(p, "media_type", None) or p.style
        lines.append(
            f"Added {_effect_noun(stage, styled)} '{p.keyword}' "
            f"(sentence {p.sentence_index})"
        )
    for p in delta.removed:
        styled = getattr(p, "media_type", None) or p.style
        lines.append(
            f"Removed {_effect_noun(stage, styled)} '{p.keyword}' "
            f"(sentence {p.sentence_index})"
        )
    for m in delta.moved:
        lines.append(
            f"Moved {_effect_kind(stage)} '{m.keyword}' "
            f"(sentence {m.from_sentence} -> sentence {m.to_sentence})"
        )
    for r in delta.restyled:
        lines.append(
            f"Restyled {_effect_kind(stage)} '{r.keyword}' "
            f"(sentence {r.sentence_index}: {r.from_value} -> {r.to_value})"
        )
    return lines


def summarize_changes(
    old: Variation, new: Variation, sections: Sequence[Section]
) -> ChangeSummary:
    """Human-readable delta between two same-stage variations.

    The diff runs old -> new, so a positive section delta reads as
    "shortened" and a negative one as "extended"/"added".
    """
    if old.stage != new.stage:
        raise ValueError(f"cannot summarize across stages {old.stage} vs {new.stage}")
    if old.stage == "rough_cut":
        report = diff_rough_cuts(old.rough_cut, new.rough_cut, sections)
        lines = _section_lines(report, old, new, sections)
    else:
        report = diff_effects(old, new)
        lines = _effect_lines(report, old.stage)
    if not lines:
        lines = [NO_CHANGES]
    return ChangeSummary(tuple(lines), report)
