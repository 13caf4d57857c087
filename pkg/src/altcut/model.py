"""Shared data model: transcripts, sections, edit payloads, variations, projects.

Every value type is an immutable dataclass with an exact JSON round-trip
(``to_dict`` / ``from_dict``). A :class:`Project` is the one mutable container
and is only written through the workspace's single-writer lock.

Conventions baked into the model:
  - all timing is integer milliseconds on half-open ``[start, end)`` intervals;
  - rough-cut spans may only start/end on the sentence-boundary grid (plus the
    source's outer edges), which rules out mid-sentence cuts by construction;
  - a source moment appears at most once per rough cut, in source order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Optional

from altcut.intervals import TimeInterval, merge_spans, total_ms

SCHEMA_VERSION = 1

STAGES = ("rough_cut", "broll", "text_effects")
MEDIA_TYPES = ("illustration", "photo", "video")
TEXT_STYLES = ("lower_third", "title", "subtitle")
STATUSES = ("normal", "pinned", "archived")

LENGTH_BUCKETS = ("under_2min", "between_2_4min", "between_4_5min")
FOCUS_MODES = ("focus_1_2_sections", "focus_3_4_sections", "many_sections")
COUNT_BUCKETS = ("n2_3", "n4_5", "n7_10")


class ModelError(ValueError):
    """Raised when a value type is constructed in an invalid state."""


def _interval_from(d: dict) -> TimeInterval:
    return TimeInterval(int(d["start_ms"]), int(d["end_ms"]))


@dataclass(frozen=True)
class Word:
    text: str
    interval: TimeInterval
    sentence_index: int

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "start_ms": self.interval.start_ms,
            "end_ms": self.interval.end_ms,
            "sentence_index": self.sentence_index,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Word":
        return cls(d["text"], _interval_from(d), int(d["sentence_index"]))


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    interval: TimeInterval
    word_range: tuple[int, int]  # half-open indices into Transcript.words

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "text": self.text,
            "start_ms": self.interval.start_ms,
            "end_ms": self.interval.end_ms,
            "word_start": self.word_range[0],
            "word_end": self.word_range[1],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Sentence":
        return cls(
            int(d["index"]),
            d["text"],
            _interval_from(d),
            (int(d["word_start"]), int(d["word_end"])),
        )


@dataclass(frozen=True)
class Transcript:
    words: tuple[Word, ...]
    sentences: tuple[Sentence, ...]
    source_duration_ms: int

    def boundary_grid(self) -> list[int]:
        """Valid cut points: sentence starts/ends plus the source's outer edges."""
        points = {0, self.source_duration_ms}
        for s in self.sentences:
            points.add(s.interval.start_ms)
            points.add(s.interval.end_ms)
        return sorted(points)

    def sentence_gaps(self) -> list[int]:
        """Silence between consecutive sentences; entry i sits after sentence i."""
        return [
            b.interval.start_ms - a.interval.end_ms
            for a, b in zip(self.sentences, self.sentences[1:])
        ]

    def to_dict(self) -> dict:
        return {
            "source_duration_ms": self.source_duration_ms,
            "words": [w.to_dict() for w in self.words],
            "sentences": [s.to_dict() for s in self.sentences],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Transcript":
        return cls(
            tuple(Word.from_dict(w) for w in d["words"]),
            tuple(Sentence.from_dict(s) for s in d["sentences"]),
            int(d["source_duration_ms"]),
        )


@dataclass(frozen=True)
class Section:
    id: str
    title: str
    interval: TimeInterval
    color_index: int
    keywords: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "start_ms": self.interval.start_ms,
            "end_ms": self.interval.end_ms,
            "color_index": self.color_index,
            "keywords": list(self.keywords),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Section":
        return cls(
            d["id"],
            d["title"],
            _interval_from(d),
            int(d["color_index"]),
            tuple(d.get("keywords", ())),
        )


@dataclass(frozen=True)
class FrameStripEntry:
    at_ms: int
    image_ref: str

    def to_dict(self) -> dict:
        return {"at_ms": self.at_ms, "image_ref": self.image_ref}

    @classmethod
    def from_dict(cls, d: dict) -> "FrameStripEntry":
        return cls(int(d["at_ms"]), d["image_ref"])


@dataclass(frozen=True)
class RoughCut:
    """Ordered, non-overlapping source spans forming the edited narrative."""

    spans: tuple[TimeInterval, ...]

    def __post_init__(self):
        if not self.spans:
            raise ModelError("a rough cut needs at least one span")

    @classmethod
    def from_spans(cls, spans: Iterable[TimeInterval]) -> "RoughCut":
        """Canonical constructor: sorts and coalesces touching spans."""
        return cls(tuple(merge_spans(list(spans))))

    @property
    def edited_duration_ms(self) -> int:
        return total_ms(list(self.spans))

    def to_dict(self) -> dict:
        return {"spans": [s.to_pair() for s in self.spans]}

    @classmethod
    def from_dict(cls, d: dict) -> "RoughCut":
        return cls(tuple(TimeInterval(int(a), int(b)) for a, b in d["spans"]))


@dataclass(frozen=True)
class BRollPlacement:
    sentence_index: int
    edited_interval: TimeInterval  # on the parent rough cut's edited clock
    keyword: str
    media_type: str
    asset_ref: str

    def __post_init__(self):
        if self.media_type not in MEDIA_TYPES:
            raise ModelError(f"unknown media type {self.media_type!r}")

    @property
    def key(self) -> tuple[int, str]:
        return (self.sentence_index, self.keyword)

    def to_dict(self) -> dict:
        return {
            "sentence_index": self.sentence_index,
            "start_ms": self.edited_interval.start_ms,
            "end_ms": self.edited_interval.end_ms,
            "keyword": self.keyword,
            "media_type": self.media_type,
            "asset_ref": self.asset_ref,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BRollPlacement":
        return cls(
            int(d["sentence_index"]),
            _interval_from(d),
            d["keyword"],
            d["media_type"],
            d["asset_ref"],
        )


@dataclass(frozen=True)
class TextEffectPlacement:
    sentence_index: int
    keyword: str  # the emphasized pull-quote text, verbatim from the sentence
    style: str
    edited_interval: TimeInterval

    def __post_init__(self):
        if self.style not in TEXT_STYLES:
            raise ModelError(f"unknown text style {self.style!r}")

    @property
    def key(self) -> tuple[int, str]:
        return (self.sentence_index, self.keyword)

    def to_dict(self) -> dict:
        return {
            "sentence_index": self.sentence_index,
            "keyword": self.keyword,
            "style": self.style,
            "start_ms": self.edited_interval.start_ms,
            "end_ms": self.edited_interval.end_ms,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TextEffectPlacement":
        return cls(int(d["sentence_index"]), d["keyword"], d["style"], _interval_from(d))


@dataclass(frozen=True)
class GenerationSpec:
    """One cell of the per-stage augmentation matrix; all-None means the
    unconstrained cell."""

    stage: str
    length_bucket: Optional[str] = None  # rough_cut
    focus: Optional[str] = None  # rough_cut
    media: Optional[str] = None  # broll
    effect_count_bucket: Optional[str] = None  # broll, text_effects
    style: Optional[str] = None  # text_effects

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ModelError(f"unknown stage {self.stage!r}")
        allowed = {
            "rough_cut": ("length_bucket", "focus"),
            "broll": ("media", "effect_count_bucket"),
            "text_effects": ("style", "effect_count_bucket"),
        }[self.stage]
        for name in ("length_bucket", "focus", "media", "effect_count_bucket", "style"):
            if getattr(self, name) is not None and name not in allowed:
                raise ModelError(f"{name} is not a {self.stage} attribute")

    @property
    def unconstrained(self) -> bool:
        return all(
            getattr(self, f) is None
            for f in ("length_bucket", "focus", "media", "effect_count_bucket", "style")
        )

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"stage": self.stage}
        for name in ("length_bucket", "focus", "media", "effect_count_bucket", "style"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "GenerationSpec":
        return cls(
            d["stage"],
            d.get("length_bucket"),
            d.get("focus"),
            d.get("media"),
            d.get("effect_count_bucket"),
            d.get("style"),
        )


@dataclass(frozen=True)
class Provenance:
    """Where a variation came from: a matrix cell, a user prompt, a
    recombination of existing versions, or a novelty-seeking generation."""

    kind: str  # matrix_cell | user_prompt | recombination | surprise
    spec: Optional[GenerationSpec] = None
    prompt: Optional[str] = None
    parent_ids: tuple[str, ...] = ()
    novelty: Optional[float] = None
    low_novelty: bool = False

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.spec is not None:
            out["spec"] = self.spec.to_dict()
        if self.prompt is not None:
            out["prompt"] = self.prompt
        if self.parent_ids:
            out["parent_ids"] = list(self.parent_ids)
        if self.novelty is not None:
            out["novelty"] = self.novelty
        if self.low_novelty:
            out["low_novelty"] = True
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Provenance":
        spec = GenerationSpec.from_dict(d["spec"]) if "spec" in d else None
        return cls(
            d["kind"],
            spec,
            d.get("prompt"),
            tuple(d.get("parent_ids", ())),
            d.get("novelty"),
            bool(d.get("low_novelty", False)),
        )


@dataclass(frozen=True)
class Variation:
    id: str
    stage: str
    payload: Any  # RoughCut | tuple[BRollPlacement,...] | tuple[TextEffectPlacement,...]
    provenance: Provenance
    parent_id: Optional[str] = None
    status: str = "normal"
    status_seq: int = 0  # event seq of the last status change; drives pin recency

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ModelError(f"unknown stage {self.stage!r}")
        if self.status not in STATUSES:
            raise ModelError(f"unknown status {self.status!r}")

    @property
    def rough_cut(self) -> RoughCut:
        if self.stage != "rough_cut":
            raise ModelError(f"variation {self.id} is not a rough cut")
        return self.payload

    @property
    def placements(self) -> tuple:
        if self.stage == "rough_cut":
            raise ModelError(f"variation {self.id} has no placements")
        return self.payload

    def with_status(self, status: str, status_seq: int) -> "Variation":
        return replace(self, status=status, status_seq=status_seq)

    def to_dict(self) -> dict:
        if self.stage == "rough_cut":
            payload = self.payload.to_dict()
        else:
            payload = {"placements": [p.to_dict() for p in self.payload]}
        return {
            "id": self.id,
            "stage": self.stage,
            "parent_id": self.parent_id,
            "payload": payload,
            "status": self.status,
            "status_seq": self.status_seq,
            "provenance": self.provenance.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Variation":
        stage = d["stage"]
        if stage == "rough_cut":
            payload: Any = RoughCut.from_dict(d["payload"])
        elif stage == "broll":
            payload = tuple(
                BRollPlacement.from_dict(p) for p in d["payload"]["placements"]
            )
        else:
            payload = tuple(
                TextEffectPlacement.from_dict(p) for p in d["payload"]["placements"]
            )
        return cls(
            d["id"],
            stage,
            payload,
            Provenance.from_dict(d["provenance"]),
            d.get("parent_id"),
            d.get("status", "normal"),
            int(d.get("status_seq", 0)),
        )


@dataclass
class Project:
    """The mutable container for one source video's editing session."""

    project_id: str
    source_duration_ms: int
    transcript: Transcript
    sections: list[Section] = field(default_factory=list)
    sentence_keywords: list[list[str]] = field(default_factory=list)
    frame_strip: list[FrameStripEntry] = field(default_factory=list)
    variations: dict[str, list[Variation]] = field(
        default_factory=lambda: {stage: [] for stage in STAGES}
    )
    selected: dict[str, Optional[str]] = field(
        default_factory=lambda: {stage: None for stage in STAGES}
    )
    next_variation_seq: int = 1
    segmentation_source: str = "fallback"  # backend | fallback
    schema_version: int = SCHEMA_VERSION

    def all_variations(self) -> list[Variation]:
        return [v for stage in STAGES for v in self.variations[stage]]

    def find_variation(self, variation_id: str) -> Optional[Variation]:
        for v in self.all_variations():
            if v.id == variation_id:
                return v
        return None

    def rough_cut_ancestor(self, variation: Variation) -> Optional[Variation]:
        """Walk parent links until the defining rough cut (or None if broken)."""
        seen = set()
        current: Optional[Variation] = variation
        while current is not None and current.id not in seen:
            if current.stage == "rough_cut":
                return current
            seen.add(current.id)
            if current.parent_id is None:
                return None
            current = self.find_variation(current.parent_id)
        return None

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "project_id": self.project_id,
            "source_duration_ms": self.source_duration_ms,
            "transcript": self.transcript.to_dict(),
            "sentence_keywords": [list(ks) for ks in self.sentence_keywords],
            "sections": [s.to_dict() for s in self.sections],
            "frame_strip": [f.to_dict() for f in self.frame_strip],
            "variations": {
                stage: [v.to_dict() for v in self.variations[stage]] for stage in STAGES
            },
            "selected": {stage: self.selected[stage] for stage in STAGES},
            "next_variation_seq": self.next_variation_seq,
            "segmentation_source": self.segmentation_source,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Project":
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ModelError(
                f"unsupported project schema_version {version!r}; "
                f"this build reads version {SCHEMA_VERSION}"
            )
        return cls(
            project_id=d["project_id"],
            source_duration_ms=int(d["source_duration_ms"]),
            transcript=Transcript.from_dict(d["transcript"]),
            sections=[Section.from_dict(s) for s in d["sections"]],
            sentence_keywords=[list(ks) for ks in d.get("sentence_keywords", [])],
            frame_strip=[FrameStripEntry.from_dict(f) for f in d.get("frame_strip", [])],
            variations={
                stage: [Variation.from_dict(v) for v in d["variations"].get(stage, [])]
                for stage in STAGES
            },
            selected={stage: d["selected"].get(stage) for stage in STAGES},
            next_variation_seq=int(d.get("next_variation_seq", 1)),
            segmentation_source=d.get("segmentation_source", "fallback"),
            schema_version=SCHEMA_VERSION,
        )


def full_source_section(duration_ms: int) -> Section:
    """Single covering section used when there is nothing to segment."""
    return Section("sec0", "Full Video", TimeInterval(0, duration_ms), 0)
