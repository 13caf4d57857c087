"""Project lifecycle: event-sourced persistence and the single-writer shell.

Every mutation is appended to the project's event log with a gap-free
sequence number, and the same ``apply_event`` transition runs both live and
during replay, so replaying the log from the first event reproduces the
persisted project state byte for byte. The project document on disk is a
canonical-JSON snapshot of the folded state.

Mutations are serialized through one lock; readers get the last committed
project object, which is never mutated in place after commit.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Sequence

from altcut.assets import AssetSearchClient, LocalCatalogClient
from altcut.backends import AnalysisBackend
from altcut import generation
from altcut.alignment import TimelineMapping, build_mapping
from altcut.diffing import (
    CoverageMatrix,
    DiffReport,
    InclusionMatrix,
    diff_effects,
    diff_rough_cuts,
    inclusion_matrix,
    section_coverage,
)
from altcut.exporters import (
    EXPORT_FORMATS,
    export_diff_html,
    export_edl_json,
    export_srt,
)
from altcut.generation import PreconditionError, RefineResult
from altcut.jsonutil import canonical_json, canonical_json_pretty
from altcut.mock_backend import MockBackend
from altcut.model import (
    STAGES,
    FrameStripEntry,
    Project,
    RoughCut,
    Section,
    Transcript,
    Variation,
    full_source_section,
)
from altcut.organize import DEFAULT_KEYS, SortKey, sort_variations
from altcut.segmentation import extract_visual_keywords, segment_sections
from altcut.summaries import ChangeSummary, summarize_changes
from altcut.transcript_io import ingest_transcript

EVENT_KINDS = (
    "ingest",
    "segment",
    "generate",
    "refine",
    "recombine",
    "surprise",
    "set_status",
    "select",
    "export",
)


class WorkspaceError(RuntimeError):
    code = "workspace_error"


class UnknownProjectError(WorkspaceError):
    code = "unknown_project"


class UnknownVariationError(WorkspaceError):
    code = "unknown_variation"


@dataclass(frozen=True)
class MutationEvent:
    seq: int
    timestamp: str
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "timestamp": self.timestamp,
            "kind": self.kind,
            "payload": self.payload,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MutationEvent":
        return cls(int(d["seq"]), d["timestamp"], d["kind"], d["payload"])


def apply_event(project: Optional[Project], event: MutationEvent) -> Project:
    """Fold one event into the project state; pure state transition."""
    payload = event.payload
    if event.kind == "ingest":
        return Project(
            project_id=payload["project_id"],
            source_duration_ms=int(payload["source_duration_ms"]),
            transcript=Transcript.from_dict(payload["transcript"]),
            frame_strip=[FrameStripEntry.from_dict(f) for f in payload["frame_strip"]],
        )
    if project is None:
        raise WorkspaceError(f"event {event.seq} ({event.kind}) arrived before ingest")

    if event.kind == "segment":
        project.sections = [Section.from_dict(s) for s in payload["sections"]]
        project.sentence_keywords = [list(k) for k in payload["sentence_keywords"]]
        project.segmentation_source = payload["segmentation_source"]
    elif event.kind == "generate":
        stage = payload["stage"]
        project.variations[stage].extend(
            Variation.from_dict(v) for v in payload["variations"]
        )
        project.next_variation_seq = int(payload["next_variation_seq"])
    elif event.kind in ("refine", "recombine", "surprise"):
        variation = Variation.from_dict(payload["variation"])
        project.variations[variation.stage].append(variation)
        project.next_variation_seq = int(payload["next_variation_seq"])
    elif event.kind == "set_status":
        vid = payload["variation_id"]
        for stage in STAGES:
            project.variations[stage] = [
                v.with_status(payload["status"], int(payload["status_seq"]))
                if v.id == vid
                else v
                for v in project.variations[stage]
            ]
    elif event.kind == "select":
        project.selected[payload["stage"]] = payload["variation_id"]
        for stage in payload["cleared"]:
            project.variations[stage] = []
            project.selected[stage] = None
    elif event.kind == "export":
        pass  # audit-only
    else:
        raise WorkspaceError(f"unknown event kind {event.kind!r}")
    return project


def replay_events(events: Sequence[MutationEvent]) -> Project:
    project: Optional[Project] = None
    expected = 1
    for event in events:
        if event.seq != expected:
            raise WorkspaceError(
                f"event log has a gap: expected seq {expected}, got {event.seq}"
            )
        project = apply_event(project, event)
        expected += 1
    if project is None:
        raise WorkspaceError("event log is empty")
    return project


def _default_clock() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


class Workspace:
    """Multi-project store rooted at a directory; one writer, many readers."""

    def __init__(
        self,
        root: str | Path,
        backend: Optional[AnalysisBackend] = None,
        assets: Optional[AssetSearchClient] = None,
        clock: Optional[Callable[[], str]] = None,
    ):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.backend = backend or MockBackend()
        self.assets = assets or LocalCatalogClient()
        self._clock = clock or _default_clock
        self._lock = threading.RLock()
        self._projects: dict[str, Project] = {}

    # ------------------------------------------------------------------
    # Storage

    def _project_dir(self, project_id: str) -> Path:
        return self.root / project_id

    def _events_path(self, project_id: str) -> Path:
        return self._project_dir(project_id) / "events.jsonl"

    def _snapshot_path(self, project_id: str) -> Path:
        return self._project_dir(project_id) / "project.json"

    def project_ids(self) -> list[str]:
        return sorted(
            p.name for p in self.root.iterdir() if (p / "project.json").exists()
        )

    def get_project(self, project_id: str) -> Project:
        with self._lock:
            if project_id not in self._projects:
                path = self._snapshot_path(project_id)
                if not path.exists():
                    raise UnknownProjectError(f"no project {project_id} under {self.root}")
                self._projects[project_id] = Project.from_dict(
                    json.loads(path.read_text(encoding="utf-8"))
                )
            return self._projects[project_id]

    def read_events(self, project_id: str) -> list[MutationEvent]:
        path = self._events_path(project_id)
        if not path.exists():
            raise UnknownProjectError(f"no event log for project {project_id}")
        return [
            MutationEvent.from_dict(json.loads(line))
            for line in path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]

    def verify_replay(self, project_id: str) -> bool:
        """True iff replaying the event log reproduces project.json exactly."""
        replayed = replay_events(self.read_events(project_id))
        stored = self._snapshot_path(project_id).read_bytes()
        return canonical_json_pretty(replayed.to_dict()).encode("utf-8") == stored

    def _persist(self, project: Project, new_events: list[MutationEvent]) -> None:
        directory = self._project_dir(project.project_id)
        directory.mkdir(parents=True, exist_ok=True)
        events_path = self._events_path(project.project_id)
        with events_path.open("a", encoding="utf-8") as fh:
            for event in new_events:
                fh.write(canonical_json(event.to_dict()) + "\n")
        tmp = self._snapshot_path(project.project_id).with_suffix(".json.tmp")
        tmp.write_text(canonical_json_pretty(project.to_dict()), encoding="utf-8")
        tmp.replace(self._snapshot_path(project.project_id))

    def _clone(self, project: Project) -> Project:
        return Project.from_dict(project.to_dict())

    def _next_seq(self, project_id: str) -> int:
        try:
            events = self.read_events(project_id)
        except UnknownProjectError:
            return 1
        return events[-1].seq + 1 if events else 1

    def _commit(
        self, project_id: str, staged: list[tuple[str, dict]], base: Optional[Project]
    ) -> Project:
        """Apply staged (kind, payload) pairs as consecutive events and persist."""
        seq = self._next_seq(project_id)
        project = base
        events = []
        for kind, payload in staged:
            if kind not in EVENT_KINDS:
                raise WorkspaceError(f"unknown event kind {kind!r}")
            event = MutationEvent(seq, self._clock(), kind, payload)
            project = apply_event(project, event)
            events.append(event)
            seq += 1
        assert project is not None
        self._persist(project, events)
        self._projects[project_id] = project
        return project

    # ------------------------------------------------------------------
    # Mutations

    def create_project(
        self,
        transcript_source: str,
        duration_ms: int,
        fmt: Optional[str] = None,
        frame_strip: Optional[list[dict]] = None,
        project_id: Optional[str] = None,
    ) -> str:
        transcript = ingest_transcript(transcript_source, duration_ms, fmt)
        strip = [FrameStripEntry.from_dict(f) for f in frame_strip or []]
        with self._lock:
            pid = project_id or uuid.uuid4().hex[:12]
            if self._snapshot_path(pid).exists():
                raise WorkspaceError(f"project {pid} already exists")
            ingest_payload = {
                "project_id": pid,
                "source_duration_ms": duration_ms,
                "transcript": transcript.to_dict(),
                "frame_strip": [f.to_dict() for f in strip],
            }
            segment_payload = self._segmentation_payload(transcript)
            self._commit(
                pid, [("ingest", ingest_payload), ("segment", segment_payload)], None
            )
            return pid

    def _segmentation_payload(self, transcript: Transcript) -> dict:
        if transcript.sentences:
            seg = segment_sections(transcript, self.backend)
            kw = extract_visual_keywords(transcript, self.backend)
            source = "backend" if seg.source == kw.source == "backend" else "fallback"
            sections = list(seg.sections)
            keywords = [list(row) for row in kw.by_sentence]
        else:
            sections = [full_source_section(transcript.source_duration_ms)]
            keywords = []
            source = "fallback"
        return {
            "sections": [s.to_dict() for s in sections],
            "sentence_keywords": keywords,
            "segmentation_source": source,
        }

    def resegment(self, project_id: str) -> Project:
        with self._lock:
            project = self._clone(self.get_project(project_id))
            payload = self._segmentation_payload(project.transcript)
            return self._commit(project_id, [("segment", payload)], project)

    def generate(self, project_id: str, stage: str, n: int = 10) -> list[Variation]:
        with self._lock:
            project = self._clone(self.get_project(project_id))
            variations = generation.generate_variations(
                project, stage, self.backend, self.assets, n=n
            )
            seq = self._next_seq(project_id)
            stamped = [v.with_status("normal", seq) for v in variations]
            payload = {
                "stage": stage,
                "variations": [v.to_dict() for v in stamped],
                "next_variation_seq": project.next_variation_seq + len(stamped),
            }
            self._commit(project_id, [("generate", payload)], project)
            return stamped

    def refine(self, project_id: str, variation_id: str, prompt: str) -> RefineResult:
        with self._lock:
            project = self._clone(self.get_project(project_id))
            variation = self._find(project, variation_id)
            result = generation.refine(
                variation, prompt, project, self.backend, self.assets
            )
            seq = self._next_seq(project_id)
            stamped = result.variation.with_status("pinned", seq)
            payload = {
                "variation": stamped.to_dict(),
                "summary_lines": list(result.summary.lines),
                "no_change": result.no_change,
                "next_variation_seq": project.next_variation_seq + 1,
            }
            self._commit(project_id, [("refine", payload)], project)
            return RefineResult(stamped, result.summary, result.no_change)

    def recombine(self, project_id: str, ids: Sequence[str], prompt: str) -> Variation:
        with self._lock:
            project = self._clone(self.get_project(project_id))
            variation = generation.recombine(
                ids, prompt, project, self.backend, self.assets
            )
            seq = self._next_seq(project_id)
            stamped = variation.with_status("pinned", seq)
            payload = {
                "variation": stamped.to_dict(),
                "next_variation_seq": project.next_variation_seq + 1,
            }
            self._commit(project_id, [("recombine", payload)], project)
            return stamped

    def surprise(self, project_id: str, stage: str) -> Variation:
        with self._lock:
            project = self._clone(self.get_project(project_id))
            variation = generation.surprise_me(
                project, stage, self.backend, self.assets
            )
            seq = self._next_seq(project_id)
            stamped = variation.with_status("pinned", seq)
            payload = {
                "variation": stamped.to_dict(),
                "next_variation_seq": project.next_variation_seq + 1,
            }
            self._commit(project_id, [("surprise", payload)], project)
            return stamped

    def set_status(self, project_id: str, variation_id: str, status: str) -> list[str]:
        """Change a variation's status; returns the stage's refreshed outline."""
        with self._lock:
            project = self._clone(self.get_project(project_id))
            variation = self._find(project, variation_id)
            seq = self._next_seq(project_id)
            payload = {
                "variation_id": variation_id,
                "status": status,
                "status_seq": seq,
            }
            project = self._commit(project_id, [("set_status", payload)], project)
            return self.list_variations(project_id, variation.stage)[0]

    def select_variation(self, project_id: str, variation_id: str) -> Project:
        with self._lock:
            project = self._clone(self.get_project(project_id))
            variation = self._find(project, variation_id)
            if variation.status == "archived":
                raise PreconditionError(
                    f"cannot select archived variation {variation_id}"
                )
            if project.selected[variation.stage] == variation_id:
                return project
            downstream = STAGES[STAGES.index(variation.stage) + 1:]
            cleared = [st for st in downstream if project.variations[st]]
            payload = {
                "stage": variation.stage,
                "variation_id": variation_id,
                "cleared": cleared,
            }
            return self._commit(project_id, [("select", payload)], project)

    def export(
        self,
        project_id: str,
        variation_id: str,
        fmt: str,
        other_id: Optional[str] = None,
    ):
        """Returns (content, media_type); logs the export as an event."""
        with self._lock:
            project = self._clone(self.get_project(project_id))
            variation = self._find(project, variation_id)
            if fmt == "edl_json":
                content, media = export_edl_json(project, variation), "application/json"
            elif fmt == "srt":
                content, media = export_srt(project, variation), "application/x-subrip"
            elif fmt == "diff_html":
                if other_id is None:
                    raise WorkspaceError("diff_html export needs `other` variation id")
                other = self._find(project, other_id)
                content, media = export_diff_html(project, variation, other), "text/html"
            else:
                raise WorkspaceError(
                    f"unknown export format {fmt!r}; formats: {', '.join(EXPORT_FORMATS)}"
                )
            payload = {"variation_id": variation_id, "format": fmt}
            self._commit(project_id, [("export", payload)], project)
            return content, media

    # ------------------------------------------------------------------
    # Reads

    def _find(self, project: Project, variation_id: str) -> Variation:
        variation = project.find_variation(variation_id)
        if variation is None:
            raise UnknownVariationError(
                f"no variation {variation_id} in project {project.project_id}"
            )
        return variation

    def list_variations(
        self,
        project_id: str,
        stage: str,
        sort_field: Optional[str] = None,
        direction: str = "asc",
    ) -> tuple[list[str], list[Variation]]:
        """(ordered ids, variations in that order) for one stage."""
        project = self.get_project(project_id)
        variations = project.variations[stage]
        if not variations:
            return [], []
        key = SortKey(sort_field or DEFAULT_KEYS[stage], direction)
        order = sort_variations(variations, key, project.sections)
        by_id = {v.id: v for v in variations}
        return order, [by_id[vid] for vid in order]

    def effective_cut(self, project: Project, variation: Variation) -> RoughCut:
        if variation.stage == "rough_cut":
            return variation.payload
        ancestor = project.rough_cut_ancestor(variation)
        if ancestor is None:
            raise WorkspaceError(f"variation {variation.id} has no rough-cut ancestor")
        return ancestor.payload

    def _stage_rough_rows(self, project: Project, stage: str) -> list[Variation]:
        rows = []
        for v in project.variations[stage]:
            cut = self.effective_cut(project, v)
            rows.append(
                Variation(v.id, "rough_cut", cut, v.provenance, v.parent_id, v.status, v.status_seq)
            )
        return rows

    def coverage(self, project_id: str, stage: str) -> CoverageMatrix:
        project = self.get_project(project_id)
        rows = self._stage_rough_rows(project, stage)
        return section_coverage(rows, project.sections)

    def inclusion(self, project_id: str, stage: str) -> InclusionMatrix:
        project = self.get_project(project_id)
        rows = self._stage_rough_rows(project, stage)
        return inclusion_matrix(rows, project.transcript)

    def diff(self, project_id: str, a_id: str, b_id: str) -> DiffReport:
        project = self.get_project(project_id)
        a, b = self._find(project, a_id), self._find(project, b_id)
        if a.stage != b.stage:
            raise WorkspaceError(f"cannot diff across stages {a.stage} vs {b.stage}")
        if a.stage == "rough_cut":
            return diff_rough_cuts(a.payload, b.payload, project.sections)
        return diff_effects(a, b, project)

    def summary(self, project_id: str, old_id: str, new_id: str) -> ChangeSummary:
        project = self.get_project(project_id)
        old, new = self._find(project, old_id), self._find(project, new_id)
        return summarize_changes(old, new, project.sections)

    def mapping(self, project_id: str, variation_id: str) -> TimelineMapping:
        project = self.get_project(project_id)
        variation = self._find(project, variation_id)
        return build_mapping(self.effective_cut(project, variation))
