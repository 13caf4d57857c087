"""Diverse variation generation, hardening of backend output, and the
refine / recombine / surprise customization loop.

Each stage's diversity comes from an augmentation matrix: the full cross
product of the stage's two attribute axes (3 x 3 = 9 cells) plus one
unconstrained cell, ten specs in total. Candidates coming back from a
backend are never trusted: ``validate_and_repair`` snaps spans to sentence
boundaries, clips to the source, merges overlaps, re-derives placement
timing from the parent cut, and rejects anything that cannot be made to
satisfy its spec's constraints.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from altcut.alignment import build_mapping, map_span_to_edited
from altcut.assets import AssetSearchClient, LocalCatalogClient
from altcut.backends import AnalysisBackend, BackendError, checked_complete
from altcut.intervals import (
    TimeInterval,
    intersect_spans,
    jaccard_distance,
    merge_spans,
    snap_to_grid,
    subtract_spans,
    total_ms,
)
from altcut.model import (
    COUNT_BUCKETS,
    FOCUS_MODES,
    LENGTH_BUCKETS,
    MEDIA_TYPES,
    TEXT_STYLES,
    BRollPlacement,
    GenerationSpec,
    Project,
    Provenance,
    RoughCut,
    Section,
    TextEffectPlacement,
    Variation,
)
from altcut.summaries import ChangeSummary, summarize_changes

logger = logging.getLogger(__name__)

DEFAULT_VARIATION_COUNT = 10
DURATION_TOLERANCE = 0.15

LENGTH_WINDOWS_MS = {
    "under_2min": (0, 120_000),
    "between_2_4min": (120_000, 240_000),
    "between_4_5min": (240_000, 300_000),
}
COUNT_RANGES = {"n2_3": (2, 3), "n4_5": (4, 5), "n7_10": (7, 10)}
MANY_SECTIONS_MIN = 5


class GenerationError(RuntimeError):
    pass


class PreconditionError(GenerationError):
    pass


class CandidateRejected(GenerationError):
    """The candidate cannot be repaired into a spec-satisfying variation."""

    def __init__(self, reasons: list[str]):
        self.reasons = list(reasons)
        super().__init__("; ".join(reasons))


@dataclass(frozen=True)
class RefineResult:
    variation: Variation
    summary: ChangeSummary
    no_change: bool


def length_window_ms(bucket: str) -> tuple[int, int]:
    return LENGTH_WINDOWS_MS[bucket]


def tolerant_length_window_ms(bucket: str) -> tuple[int, int]:
    """Bucket edges widened by the duration tolerance."""
    lo, hi = LENGTH_WINDOWS_MS[bucket]
    return (
        math.floor(lo * (1 - DURATION_TOLERANCE)),
        math.ceil(hi * (1 + DURATION_TOLERANCE)),
    )


def count_range(bucket: str) -> tuple[int, int]:
    return COUNT_RANGES[bucket]


def augmentation_matrix(stage: str) -> list[GenerationSpec]:
    """The stage's 3x3 attribute cross product plus one unconstrained cell."""
    if stage == "rough_cut":
        cells = [
            GenerationSpec(stage, length_bucket=length, focus=focus)
            for length in LENGTH_BUCKETS
            for focus in FOCUS_MODES
        ]
    elif stage == "broll":
        cells = [
            GenerationSpec(stage, media=media, effect_count_bucket=count)
            for media in MEDIA_TYPES
            for count in COUNT_BUCKETS
        ]
    elif stage == "text_effects":
        cells = [
            GenerationSpec(stage, style=style, effect_count_bucket=count)
            for style in TEXT_STYLES
            for count in COUNT_BUCKETS
        ]
    else:
        raise GenerationError(f"unknown stage {stage!r}")
    cells.append(GenerationSpec(stage))
    return cells


# ---------------------------------------------------------------------------
# Candidate hardening


def _repair_rough_cut_spans(
    spans_raw: Sequence[Sequence[int]], project: Project, repairs: list[str]
) -> list[TimeInterval]:
    duration = project.source_duration_ms
    grid = project.transcript.boundary_grid()
    spans: list[TimeInterval] = []
    for pair in spans_raw:
        start, end = int(pair[0]), int(pair[1])
        clipped_start, clipped_end = max(0, start), min(end, duration)
        if (clipped_start, clipped_end) != (start, end):
            repairs.append(
                f"clipped span [{start},{end}) to [{clipped_start},{clipped_end})"
            )
        if clipped_start >= clipped_end:
            repairs.append(f"dropped empty span [{start},{end})")
            continue
        snapped_start = snap_to_grid(clipped_start, grid)
        snapped_end = snap_to_grid(clipped_end, grid)
        if (snapped_start, snapped_end) != (clipped_start, clipped_end):
            repairs.append(
                f"snapped span [{clipped_start},{clipped_end}) to sentence "
                f"boundaries [{snapped_start},{snapped_end})"
            )
        if snapped_start >= snapped_end:
            repairs.append(f"dropped span [{start},{end}): empty after snapping")
            continue
        spans.append(TimeInterval(snapped_start, snapped_end))
    merged = merge_spans(spans)
    if len(merged) < len(spans):
        repairs.append("merged overlapping spans")
    return merged


def _section_fraction_class(covered: int, section: Section) -> str:
    """Exact integer classification against the 10% / 50% focus thresholds."""
    d = section.interval.duration_ms
    if 2 * covered >= d:
        return "focus"
    if 10 * covered >= d and covered > 0:
        return "mid"
    return "minor"  # below 10%, including zero


def _apply_focus_rules(
    spans: list[TimeInterval],
    sections: Sequence[Section],
    focus: str,
    repairs: list[str],
) -> list[TimeInterval]:
    if focus == "many_sections":
        touched = sum(
            1 for sec in sections if total_ms(intersect_spans(spans, [sec.interval])) > 0
        )
        needed = min(MANY_SECTIONS_MIN, len(sections))
        if touched < needed:
            raise CandidateRejected(
                [f"focus_unsatisfied: touches {touched} sections, needs >= {needed}"]
            )
        return spans

    k_lo, k_hi = (1, 2) if focus == "focus_1_2_sections" else (3, 4)
    while True:
        classes = {
            sec.id: _section_fraction_class(
                total_ms(intersect_spans(spans, [sec.interval])), sec
            )
            for sec in sections
        }
        mids = [sec for sec in sections if classes[sec.id] == "mid"]
        if mids:
            spans = subtract_spans(spans, [sec.interval for sec in mids])
            repairs.append(
                "removed mid-coverage sections "
                + ", ".join(sec.id for sec in mids)
            )
            continue
        focus_sections = [sec for sec in sections if classes[sec.id] == "focus"]
        if len(focus_sections) > k_hi:
            smallest = min(
                focus_sections,
                key=lambda sec: total_ms(intersect_spans(spans, [sec.interval])),
            )
            spans = subtract_spans(spans, [smallest.interval])
            repairs.append(f"removed excess focus section {smallest.id}")
            continue
        if len(focus_sections) < k_lo:
            raise CandidateRejected(
                [
                    f"focus_unsatisfied: {len(focus_sections)} sections with >=50% "
                    f"coverage, spec needs {k_lo}-{k_hi}"
                ]
            )
        return spans


def _repair_effect_placements(
    placements_raw: Sequence[dict],
    project: Project,
    spec: Optional[GenerationSpec],
    stage: str,
    parent_cut: RoughCut,
    assets: AssetSearchClient,
    repairs: list[str],
) -> list:
    sentences = project.transcript.sentences
    mapping = build_mapping(parent_cut)
    out: list = []
    seen_broll_sentences: set[int] = set()
    seen_keys: set[tuple[int, str]] = set()
    for item in placements_raw:
        idx = int(item["sentence_index"])
        keyword = str(item["keyword"])
        if not 0 <= idx < len(sentences):
            repairs.append(f"dropped placement at unknown sentence {idx}")
            continue
        sentence = sentences[idx]
        if stage == "text_effects" and keyword not in sentence.text:
            repairs.append(
                f"dropped placement: keyword {keyword!r} not verbatim in sentence {idx}"
            )
            continue
        pieces = map_span_to_edited(mapping, sentence.interval)
        if not pieces:
            repairs.append(
                f"dropped placement: sentence {idx} is excluded from the rough cut"
            )
            continue
        if stage == "broll":
            if idx in seen_broll_sentences:
                repairs.append(f"dropped duplicate B-roll at sentence {idx}")
                continue
            media = item.get("media_type") or "photo"
            if spec is not None and spec.media is not None:
                if media != spec.media:
                    repairs.append(
                        f"coerced media {media} to spec media {spec.media} "
                        f"at sentence {idx}"
                    )
                media = spec.media
            asset_ref = item.get("asset_ref") or assets.query(keyword, media, 1)[0]
            out.append(BRollPlacement(idx, pieces[0], keyword, media, asset_ref))
            seen_broll_sentences.add(idx)
        else:
            if (idx, keyword) in seen_keys:
                repairs.append(f"dropped duplicate text effect at sentence {idx}")
                continue
            style = item.get("style") or "lower_third"
            if spec is not None and spec.style is not None:
                if style != spec.style:
                    repairs.append(
                        f"coerced style {style} to spec style {spec.style} "
                        f"at sentence {idx}"
                    )
                style = spec.style
            out.append(TextEffectPlacement(idx, keyword, style, pieces[0]))
            seen_keys.add((idx, keyword))

    if spec is not None and spec.effect_count_bucket is not None:
        lo, hi = count_range(spec.effect_count_bucket)
        if len(out) > hi:
            repairs.append(f"trimmed {len(out) - hi} placements over the {hi} cap")
            out = out[:hi]
        if len(out) < lo:
            raise CandidateRejected(
                [f"under_count: {len(out)} placements, bucket needs at least {lo}"]
            )
    elif spec is not None and not out:
        raise CandidateRejected(["no_placements: nothing survived validation"])
    return sorted(out, key=lambda p: (p.sentence_index, p.keyword))


def validate_and_repair(
    candidate: dict,
    project: Project,
    spec: Optional[GenerationSpec],
    stage: str,
    parent_cut: Optional[RoughCut] = None,
    assets: Optional[AssetSearchClient] = None,
):
    """Normalize a backend candidate into a valid payload, or reject it.

    Returns ``(payload, repairs)``; raises :class:`CandidateRejected` with
    machine-readable reasons when repair cannot satisfy the spec.
    """
    repairs: list[str] = []
    if stage == "rough_cut":
        spans = _repair_rough_cut_spans(candidate.get("spans", []), project, repairs)
        if not spans:
            raise CandidateRejected(["no_spans: candidate has no usable spans"])
        if spec is not None and spec.focus is not None:
            spans = _apply_focus_rules(spans, project.sections, spec.focus, repairs)
            if not spans:
                raise CandidateRejected(["no_spans: focus repair removed everything"])
        if spec is not None and spec.length_bucket is not None:
            lo, hi = tolerant_length_window_ms(spec.length_bucket)
            duration = total_ms(spans)
            if not lo <= duration <= hi:
                raise CandidateRejected(
                    [
                        f"duration_out_of_bucket: {duration} ms outside "
                        f"[{lo},{hi}] for {spec.length_bucket}"
                    ]
                )
        return RoughCut(tuple(spans)), repairs

    if parent_cut is None:
        raise CandidateRejected(["no_parent: effect stages need a rough-cut parent"])
    placements = _repair_effect_placements(
        candidate.get("placements", []),
        project,
        spec,
        stage,
        parent_cut,
        assets or LocalCatalogClient(),
        repairs,
    )
    return tuple(placements), repairs


# ---------------------------------------------------------------------------
# Request assembly


def _sentence_rows(project: Project) -> list[dict]:
    rows = []
    for s in project.transcript.sentences:
        row = {
            "index": s.index,
            "start_ms": s.interval.start_ms,
            "end_ms": s.interval.end_ms,
            "text": s.text,
        }
        if s.index < len(project.sentence_keywords):
            row["keywords"] = list(project.sentence_keywords[s.index])
        rows.append(row)
    return rows


def _section_rows(project: Project) -> list[dict]:
    return [
        {
            "id": sec.id,
            "title": sec.title,
            "start_ms": sec.interval.start_ms,
            "end_ms": sec.interval.end_ms,
            "keywords": list(sec.keywords),
        }
        for sec in project.sections
    ]


def _payload_dict(variation: Variation) -> dict:
    if variation.stage == "rough_cut":
        return variation.payload.to_dict()
    return {"placements": [p.to_dict() for p in variation.payload]}


def _parent_context(project: Project, stage: str) -> tuple[Optional[str], Optional[RoughCut]]:
    """(parent variation id, defining rough cut) for generation at a stage."""
    if stage == "rough_cut":
        return None, None
    upstream = {"broll": "rough_cut", "text_effects": "broll"}[stage]
    selected_id = project.selected[upstream]
    if selected_id is None:
        raise PreconditionError(
            f"select a {upstream} variation before generating {stage}"
        )
    selected = project.find_variation(selected_id)
    if selected is None:
        raise PreconditionError(f"selected {upstream} variation {selected_id} not found")
    if selected.status == "archived":
        raise PreconditionError(f"selected {upstream} variation {selected_id} is archived")
    ancestor = project.rough_cut_ancestor(selected)
    if ancestor is None:
        raise PreconditionError(f"variation {selected_id} has no rough-cut ancestor")
    return selected_id, ancestor.payload


def _base_request(project: Project, stage: str, parent_cut: Optional[RoughCut]) -> dict:
    request = {
        "stage": stage,
        "source_duration_ms": project.source_duration_ms,
        "sentences": _sentence_rows(project),
        "sections": _section_rows(project),
    }
    if parent_cut is not None:
        request["parent_spans"] = [s.to_pair() for s in parent_cut.spans]
    return request


# ---------------------------------------------------------------------------
# Operations


def _check_stage_ready(project: Project, stage: str) -> None:
    if stage not in ("rough_cut", "broll", "text_effects"):
        raise GenerationError(f"unknown stage {stage!r}")
    if not project.transcript.sentences:
        raise PreconditionError("project transcript is empty; nothing to edit")


def generate_variations(
    project: Project,
    stage: str,
    backend: AnalysisBackend,
    assets: Optional[AssetSearchClient] = None,
    n: int = DEFAULT_VARIATION_COUNT,
) -> list[Variation]:
    """One candidate per augmentation-matrix cell, hardened and id-stamped.

    Cells whose candidates fail twice are omitted with a logged reason, so
    fewer than ``n`` variations may come back.
    """
    _check_stage_ready(project, stage)
    parent_id, parent_cut = _parent_context(project, stage)
    specs = augmentation_matrix(stage)
    if n < len(specs):
        specs = specs[:n]
    else:
        specs = specs + [GenerationSpec(stage)] * (n - len(specs))

    variations: list[Variation] = []
    seq = project.next_variation_seq
    backend_failures = 0
    for spec in specs:
        payload = None
        last_error: Exception | None = None
        for attempt in (1, 2):
            request = {"task": "generate", "attempt": attempt, **_base_request(project, stage, parent_cut)}
            if not spec.unconstrained:
                request["spec"] = spec.to_dict()
            try:
                response = checked_complete(backend, request)
                payload, _repairs = validate_and_repair(
                    response, project, spec, stage, parent_cut, assets
                )
                break
            except (BackendError, CandidateRejected) as e:
                last_error = e
                payload = None
        if payload is None:
            if isinstance(last_error, BackendError):
                backend_failures += 1
            logger.warning(
                "omitted matrix cell %s after retry: %s", spec.to_dict(), last_error
            )
            continue
        variations.append(
            Variation(
                id=f"v{seq}",
                stage=stage,
                payload=payload,
                provenance=Provenance("matrix_cell", spec=spec),
                parent_id=parent_id,
            )
        )
        seq += 1
    if not variations:
        raise GenerationError(
            "generation produced no variations "
            f"({backend_failures} backend failures out of {len(specs)} cells)"
        )
    return variations


def refine(
    variation: Variation,
    prompt_text: str,
    project: Project,
    backend: AnalysisBackend,
    assets: Optional[AssetSearchClient] = None,
) -> RefineResult:
    """Prompt-driven edit of one variation; the summary is computed by the
    engine's diff, never by the backend."""
    if variation.status == "archived":
        raise PreconditionError(f"cannot refine archived variation {variation.id}")
    parent_cut = None
    if variation.stage != "rough_cut":
        ancestor = project.rough_cut_ancestor(variation)
        if ancestor is None:
            raise PreconditionError(f"variation {variation.id} has no rough-cut ancestor")
        parent_cut = ancestor.payload
    request = {
        "task": "edit",
        "prompt": prompt_text,
        "payload": _payload_dict(variation),
        **_base_request(project, variation.stage, parent_cut),
    }
    response = checked_complete(backend, request)
    payload, _repairs = validate_and_repair(
        response, project, None, variation.stage, parent_cut, assets
    )
    new = Variation(
        id=f"v{project.next_variation_seq}",
        stage=variation.stage,
        payload=payload,
        provenance=Provenance("user_prompt", prompt=prompt_text),
        parent_id=variation.id,
    )
    summary = summarize_changes(variation, new, project.sections)
    return RefineResult(new, summary, payload == variation.payload)


def _variation_label(variation_id: str) -> str:
    digits = "".join(c for c in variation_id if c.isdigit())
    return f"#{digits}" if digits else f"#{variation_id}"


def recombine(
    ids: Sequence[str],
    prompt_text: str,
    project: Project,
    backend: AnalysisBackend,
    assets: Optional[AssetSearchClient] = None,
) -> Variation:
    """Merge referenced variations per the prompt; the result may only use
    material present in its parents."""
    if len(ids) < 2:
        raise PreconditionError("recombination needs at least two variation ids")
    parents = []
    for vid in ids:
        v = project.find_variation(vid)
        if v is None:
            raise PreconditionError(f"unknown variation {vid}")
        if v.status == "archived":
            raise PreconditionError(f"cannot recombine archived variation {vid}")
        parents.append(v)
    stages = {v.stage for v in parents}
    if len(stages) > 1:
        raise PreconditionError(f"cannot recombine across stages: {sorted(stages)}")
    stage = parents[0].stage

    parent_cut = None
    parent_id = None
    if stage != "rough_cut":
        ancestors = {
            (project.rough_cut_ancestor(v) or v).id for v in parents
        }
        if len(ancestors) > 1:
            raise PreconditionError(
                "cannot recombine effects with different rough-cut ancestors"
            )
        ancestor = project.rough_cut_ancestor(parents[0])
        if ancestor is None:
            raise PreconditionError("parents have no rough-cut ancestor")
        parent_cut = ancestor.payload
        parent_id = parents[0].id

    request = {
        "task": "edit",
        "prompt": prompt_text,
        "parents": [
            {"label": _variation_label(v.id), "payload": _payload_dict(v)}
            for v in parents
        ],
        **_base_request(project, stage, parent_cut),
    }
    response = checked_complete(backend, request)
    payload, repairs = validate_and_repair(
        response, project, None, stage, parent_cut, assets
    )

    # Subset property: nothing outside the union of the parents survives.
    if stage == "rough_cut":
        union = merge_spans([s for v in parents for s in v.payload.spans])
        subset = intersect_spans(list(payload.spans), union)
        if not subset:
            raise CandidateRejected(["not_subset: result shares nothing with parents"])
        if subset != list(payload.spans):
            repairs.append("trimmed spans outside the parents' material")
        payload = RoughCut(tuple(subset))
    else:
        allowed = {p.key for v in parents for p in v.payload}
        kept = tuple(p for p in payload if p.key in allowed)
        if payload and not kept:
            raise CandidateRejected(["not_subset: no placement exists in a parent"])
        if len(kept) != len(payload):
            repairs.append("dropped placements not present in any parent")
        payload = kept

    return Variation(
        id=f"v{project.next_variation_seq}",
        stage=stage,
        payload=payload,
        provenance=Provenance("recombination", prompt=prompt_text, parent_ids=tuple(ids)),
        parent_id=parent_id,
    )


def payload_distance(a, b, stage: str) -> float:
    """Stage distance: Jaccard over covered milliseconds (rough cuts) or over
    (sentence, keyword) placement keys (effect stages)."""
    if stage == "rough_cut":
        return jaccard_distance(list(a.spans), list(b.spans))
    keys_a = {p.key for p in a}
    keys_b = {p.key for p in b}
    union = keys_a | keys_b
    if not union:
        return 0.0
    return 1.0 - len(keys_a & keys_b) / len(union)


def novelty_score(payload, existing_payloads: Sequence, stage: str) -> float:
    """Minimum distance to the existing set; 0 iff a duplicate exists."""
    if not existing_payloads:
        return 1.0
    return min(payload_distance(payload, e, stage) for e in existing_payloads)


def surprise_me(
    project: Project,
    stage: str,
    backend: AnalysisBackend,
    assets: Optional[AssetSearchClient] = None,
    n_candidates: int = DEFAULT_VARIATION_COUNT,
) -> Variation:
    """Pick the backend candidate most different from the existing set."""
    existing = project.variations[stage]
    if not existing:
        raise PreconditionError(f"surprise needs at least one existing {stage} variation")
    _check_stage_ready(project, stage)
    parent_id, parent_cut = _parent_context(project, stage)
    request = {
        "task": "generate",
        "mode": "surprise",
        "n_candidates": n_candidates,
        "existing": [_payload_dict(v) for v in existing],
        **_base_request(project, stage, parent_cut),
    }
    response = checked_complete(backend, request)

    validated = []
    reasons: list[str] = []
    for candidate in response["candidates"]:
        try:
            payload, _repairs = validate_and_repair(
                candidate, project, None, stage, parent_cut, assets
            )
            validated.append(payload)
        except CandidateRejected as e:
            reasons.extend(e.reasons)
    if not validated:
        raise GenerationError(
            "no surprise candidate survived validation: " + "; ".join(reasons)
        )

    existing_payloads = [v.payload for v in existing]
    best_payload = validated[0]
    best_score = novelty_score(validated[0], existing_payloads, stage)
    for payload in validated[1:]:
        score = novelty_score(payload, existing_payloads, stage)
        if score > best_score:  # ties keep the earliest candidate
            best_payload, best_score = payload, score

    return Variation(
        id=f"v{project.next_variation_seq}",
        stage=stage,
        payload=best_payload,
        provenance=Provenance(
            "surprise", novelty=best_score, low_novelty=best_score == 0.0
        ),
        parent_id=parent_id,
    )
