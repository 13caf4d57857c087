"""Whole-project invariant checking.

``validate_project`` never raises for bad data: every broken invariant becomes
a :class:`Violation` row, so callers (tests, repair loops, the API) can react
to all problems at once. An empty result means the project is well-formed.
"""

from __future__ import annotations

from dataclasses import dataclass

from altcut.intervals import TimeInterval, intersect_spans, total_ms
from altcut.model import Project, RoughCut, Variation

STAGE_ORDER = {"rough_cut": 0, "broll": 1, "text_effects": 2}


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    where: str = ""

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "where": self.where}


def validate_project(project: Project) -> list[Violation]:
    """Return every invariant violation across the project; [] iff well-formed."""
    out: list[Violation] = []
    out += _check_transcript(project)
    out += _check_sections(project)
    out += _check_frame_strip(project)
    for stage in ("rough_cut", "broll", "text_effects"):
        for v in project.variations[stage]:
            out += _check_variation(project, v)
    out += _check_selection(project)
    out += _check_unique_ids(project)
    return out


def _check_transcript(project: Project) -> list[Violation]:
    out = []
    t = project.transcript
    if t.source_duration_ms != project.source_duration_ms:
        out.append(
            Violation(
                "duration_mismatch",
                f"transcript duration {t.source_duration_ms} != project "
                f"duration {project.source_duration_ms}",
                "transcript",
            )
        )
    for i, (a, b) in enumerate(zip(t.words, t.words[1:])):
        if b.interval.start_ms < a.interval.end_ms:
            out.append(
                Violation(
                    "word_overlap",
                    f"words {i} and {i + 1} overlap "
                    f"([{a.interval.start_ms},{a.interval.end_ms}) vs "
                    f"[{b.interval.start_ms},{b.interval.end_ms}))",
                    f"transcript.words[{i}]",
                )
            )
    if t.words and t.words[-1].interval.end_ms > t.source_duration_ms:
        out.append(
            Violation(
                "word_out_of_range",
                f"last word ends at {t.words[-1].interval.end_ms} past source "
                f"duration {t.source_duration_ms}",
                "transcript.words",
            )
        )

    covered = [False] * len(t.words)
    for position, s in enumerate(t.sentences):
        lo, hi = s.word_range
        if s.index != position:
            out.append(
                Violation("sentence_index", f"sentence index {s.index} out of order",
                          f"transcript.sentences[{position}]")
            )
        if not (0 <= lo < hi <= len(t.words)):
            out.append(
                Violation(
                    "sentence_word_range",
                    f"sentence {s.index} word range [{lo},{hi}) out of bounds",
                    f"transcript.sentences[{s.index}]",
                )
            )
            continue
        for w in range(lo, hi):
            if covered[w]:
                out.append(
                    Violation(
                        "word_in_two_sentences",
                        f"word {w} belongs to more than one sentence",
                        f"transcript.words[{w}]",
                    )
                )
            covered[w] = True
            if t.words[w].sentence_index != s.index:
                out.append(
                    Violation(
                        "word_sentence_mismatch",
                        f"word {w} labeled sentence {t.words[w].sentence_index}, "
                        f"expected {s.index}",
                        f"transcript.words[{w}]",
                    )
                )
        expected = TimeInterval(
            t.words[lo].interval.start_ms, t.words[hi - 1].interval.end_ms
        )
        if s.interval != expected:
            out.append(
                Violation(
                    "sentence_span",
                    f"sentence {s.index} interval "
                    f"[{s.interval.start_ms},{s.interval.end_ms}) != word span "
                    f"[{expected.start_ms},{expected.end_ms})",
                    f"transcript.sentences[{s.index}]",
                )
            )
    for w, seen in enumerate(covered):
        if not seen:
            out.append(
                Violation("orphan_word", f"word {w} belongs to no sentence",
                          f"transcript.words[{w}]")
            )
    for a, b in zip(t.sentences, t.sentences[1:]):
        if b.interval.start_ms < a.interval.end_ms:
            out.append(
                Violation(
                    "sentence_overlap",
                    f"sentences {a.index} and {b.index} overlap",
                    f"transcript.sentences[{a.index}]",
                )
            )
    return out


def _check_sections(project: Project) -> list[Violation]:
    out = []
    sections = project.sections
    duration = project.source_duration_ms
    if not sections:
        if duration > 0:
            out.append(
                Violation("section_gap", f"section gap [0,{duration})", "sections")
            )
        return out
    cursor = 0
    for i, sec in enumerate(sections):
        if sec.interval.start_ms > cursor:
            out.append(
                Violation(
                    "section_gap",
                    f"section gap [{cursor},{sec.interval.start_ms})",
                    f"sections[{i}]",
                )
            )
        elif sec.interval.start_ms < cursor:
            out.append(
                Violation(
                    "section_overlap",
                    f"section {sec.id} starts at {sec.interval.start_ms} "
                    f"before previous end {cursor}",
                    f"sections[{i}]",
                )
            )
        if sec.color_index != i:
            out.append(
                Violation(
                    "section_color",
                    f"section {sec.id} color_index {sec.color_index}, expected {i}",
                    f"sections[{i}]",
                )
            )
        cursor = sec.interval.end_ms
    if cursor < duration:
        out.append(
            Violation("section_gap", f"section gap [{cursor},{duration})", "sections")
        )
    elif cursor > duration:
        out.append(
            Violation(
                "section_out_of_range",
                f"sections end at {cursor} past source duration {duration}",
                "sections",
            )
        )
    return out


def _check_frame_strip(project: Project) -> list[Violation]:
    out = []
    for a, b in zip(project.frame_strip, project.frame_strip[1:]):
        if b.at_ms <= a.at_ms:
            out.append(
                Violation(
                    "frame_strip_order",
                    f"frame strip entries not strictly increasing at {b.at_ms}",
                    "frame_strip",
                )
            )
    return out


def _check_rough_cut(project: Project, v: Variation) -> list[Violation]:
    out = []
    cut: RoughCut = v.payload
    grid = set(project.transcript.boundary_grid())
    duration = project.source_duration_ms
    for i, span in enumerate(cut.spans):
        if span.end_ms > duration:
            out.append(
                Violation(
                    "span_out_of_range",
                    f"span [{span.start_ms},{span.end_ms}) exceeds source "
                    f"duration {duration}",
                    f"{v.id}.spans[{i}]",
                )
            )
        for edge in (span.start_ms, span.end_ms):
            if edge not in grid:
                out.append(
                    Violation(
                        "span_off_grid",
                        f"span boundary {edge} is not a sentence boundary",
                        f"{v.id}.spans[{i}]",
                    )
                )
    for i, (a, b) in enumerate(zip(cut.spans, cut.spans[1:])):
        if b.start_ms < a.end_ms:
            out.append(
                Violation(
                    "span_overlap",
                    f"spans [{a.start_ms},{a.end_ms}) and "
                    f"[{b.start_ms},{b.end_ms}) overlap",
                    f"{v.id}.spans[{i}]",
                )
            )
        elif b.start_ms < a.start_ms:
            out.append(
                Violation(
                    "span_order",
                    f"spans out of source order at index {i + 1}",
                    f"{v.id}.spans[{i + 1}]",
                )
            )
    return out


def _check_placements(project: Project, v: Variation) -> list[Violation]:
    out = []
    sentences = project.transcript.sentences
    ancestor = project.rough_cut_ancestor(v)
    if ancestor is None:
        out.append(
            Violation(
                "missing_ancestor",
                f"variation {v.id} has no rough-cut ancestor",
                v.id,
            )
        )
        return out
    spans = list(ancestor.payload.spans)
    edited_duration = ancestor.payload.edited_duration_ms
    occupied: list[TimeInterval] = []
    for i, p in enumerate(v.payload):
        if not (0 <= p.sentence_index < len(sentences)):
            out.append(
                Violation(
                    "bad_sentence_index",
                    f"placement references sentence {p.sentence_index}, "
                    f"transcript has {len(sentences)}",
                    f"{v.id}.placements[{i}]",
                )
            )
            continue
        sentence = sentences[p.sentence_index]
        included = total_ms(intersect_spans([sentence.interval], spans))
        if included == 0:
            out.append(
                Violation(
                    "anchor_excluded",
                    f"anchor sentence {p.sentence_index} is not included in the "
                    f"parent rough cut",
                    f"{v.id}.placements[{i}]",
                )
            )
        if p.edited_interval.end_ms > edited_duration:
            out.append(
                Violation(
                    "placement_out_of_range",
                    f"placement ends at {p.edited_interval.end_ms} past edited "
                    f"duration {edited_duration}",
                    f"{v.id}.placements[{i}]",
                )
            )
        if v.stage == "broll":
            for other in occupied:
                if p.edited_interval.overlaps(other):
                    out.append(
                        Violation(
                            "placement_overlap",
                            f"B-roll placements overlap on the edited clock at "
                            f"[{p.edited_interval.start_ms},"
                            f"{p.edited_interval.end_ms})",
                            f"{v.id}.placements[{i}]",
                        )
                    )
                    break
            occupied.append(p.edited_interval)
        if v.stage == "text_effects" and p.keyword not in sentence.text:
            out.append(
                Violation(
                    "keyword_not_verbatim",
                    f"keyword {p.keyword!r} is not a substring of sentence "
                    f"{p.sentence_index}",
                    f"{v.id}.placements[{i}]",
                )
            )
    return out


def _check_variation(project: Project, v: Variation) -> list[Violation]:
    out = []
    if v.stage == "rough_cut":
        if not isinstance(v.payload, RoughCut):
            return [Violation("payload_stage_mismatch",
                              f"variation {v.id} payload is not a rough cut", v.id)]
        out += _check_rough_cut(project, v)
    else:
        if isinstance(v.payload, RoughCut):
            return [Violation("payload_stage_mismatch",
                              f"variation {v.id} payload is not a placement list", v.id)]
        out += _check_placements(project, v)
    if v.parent_id is not None and project.find_variation(v.parent_id) is None:
        out.append(
            Violation("dangling_parent", f"parent {v.parent_id} does not exist", v.id)
        )
    return out


def _check_selection(project: Project) -> list[Violation]:
    out = []
    for stage, sel in project.selected.items():
        if sel is None:
            continue
        v = project.find_variation(sel)
        if v is None or v.stage != stage:
            out.append(
                Violation(
                    "bad_selection",
                    f"selected variation {sel} not found at stage {stage}",
                    f"selected.{stage}",
                )
            )
    for upstream, downstream in (("rough_cut", "broll"), ("broll", "text_effects")):
        if not project.variations[downstream]:
            continue
        sel = project.selected[upstream]
        v = project.find_variation(sel) if sel else None
        if v is None:
            out.append(
                Violation(
                    "missing_upstream_selection",
                    f"{downstream} variations exist but no {upstream} is selected",
                    f"selected.{upstream}",
                )
            )
        elif v.status == "archived":
            out.append(
                Violation(
                    "archived_selection",
                    f"selected {upstream} variation {sel} is archived",
                    f"selected.{upstream}",
                )
            )
    return out


def _check_unique_ids(project: Project) -> list[Violation]:
    seen: set[str] = set()
    out = []
    for v in project.all_variations():
        if v.id in seen:
            out.append(Violation("duplicate_id", f"duplicate variation id {v.id}", v.id))
        seen.add(v.id)
    return out
