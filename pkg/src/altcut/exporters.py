"""Render-free exports: project-native EDL JSON, re-clocked SRT, diff HTML.

The EDL document embeds the variation verbatim plus the context needed to
re-import it, so load(export(v)) gives back an equal Variation. SRT export
re-clocks each included sentence onto the edited timeline through the
rough-cut mapping.
"""

from __future__ import annotations

import html

from altcut.alignment import build_mapping, map_span_to_edited
from altcut.diffing import coverage_by_section
from altcut.model import Project, RoughCut, Variation
from altcut.summaries import summarize_changes
from altcut.transcript_io import write_srt

EDL_SCHEMA_VERSION = 1

EXPORT_FORMATS = ("edl_json", "srt", "diff_html")


class ExportError(ValueError):
    pass


def _defining_cut(project: Project, variation: Variation) -> RoughCut:
    if variation.stage == "rough_cut":
        return variation.payload
    ancestor = project.rough_cut_ancestor(variation)
    if ancestor is None:
        raise ExportError(f"variation {variation.id} has no rough-cut ancestor")
    return ancestor.payload


def export_edl_json(project: Project, variation: Variation) -> dict:
    cut = _defining_cut(project, variation)
    overlays: dict[str, list] = {"broll": [], "text_effects": []}
    if variation.stage in ("broll", "text_effects"):
        overlays[variation.stage] = [p.to_dict() for p in variation.payload]
    return {
        "format": "edl_json",
        "edl_schema_version": EDL_SCHEMA_VERSION,
        "project_id": project.project_id,
        "source_duration_ms": project.source_duration_ms,
        "spans": [s.to_pair() for s in cut.spans],
        "overlays": overlays,
        "variation": variation.to_dict(),
    }


def load_edl_json(document: dict) -> Variation:
    """Inverse of :func:`export_edl_json` for the embedded variation."""
    if document.get("format") != "edl_json":
        raise ExportError("not an edl_json document")
    version = document.get("edl_schema_version")
    if version != EDL_SCHEMA_VERSION:
        raise ExportError(
            f"unsupported edl_schema_version {version!r}; expected {EDL_SCHEMA_VERSION}"
        )
    return Variation.from_dict(document["variation"])


def export_srt(project: Project, variation: Variation) -> str:
    """Subtitles of the included sentences, re-clocked to the edited timeline."""
    cut = _defining_cut(project, variation)
    mapping = build_mapping(cut)
    cues = []
    for sentence in project.transcript.sentences:
        for piece in map_span_to_edited(mapping, sentence.interval):
            cues.append((piece.start_ms, piece.end_ms, sentence.text))
    cues.sort(key=lambda c: c[0])
    return write_srt(cues)


def _coverage_rows(project: Project, variation: Variation) -> list[tuple[str, int, int]]:
    cut = _defining_cut(project, variation)
    covered = coverage_by_section(cut.spans, project.sections)
    return [
        (sec.title, covered[sec.id], sec.interval.duration_ms)
        for sec in project.sections
    ]


def export_diff_html(project: Project, variation: Variation, other: Variation) -> str:
    """Static, dependency-free HTML report of ``variation`` vs ``other``."""
    if variation.stage != other.stage:
        raise ExportError("diff_html needs two variations of the same stage")
    summary = summarize_changes(other, variation, project.sections)

    def esc(text) -> str:
        return html.escape(str(text))

    lines_html = "".join(f"<li>{esc(line)}</li>" for line in summary.lines)
    rows = []
    for label, v in (("A", variation), ("B", other)):
        if v.stage != "rough_cut":
            continue
        for title, covered, total in _coverage_rows(project, v):
            pct = 100.0 * covered / total if total else 0.0
            rows.append(
                f"<tr><td>{esc(label)}</td><td>{esc(title)}</td>"
                f"<td>{covered} / {total} ms</td><td>{pct:.1f}%</td></tr>"
            )
    coverage_table = (
        "<table><tr><th>Cut</th><th>Section</th><th>Covered</th><th>%</th></tr>"
        + "".join(rows)
        + "</table>"
        if rows
        else ""
    )
    return f"""<!DOCTYPE html>
<html>
<head><meta charset="utf-8"><title>Variation diff {esc(variation.id)} vs {esc(other.id)}</title>
<style>
body {{ font-family: sans-serif; margin: 2em; }}
table {{ border-collapse: collapse; }}
td, th {{ border: 1px solid #ccc; padding: 4px 8px; }}
</style></head>
<body>
<h1>Changes: {esc(other.id)} &rarr; {esc(variation.id)}</h1>
<ul>{lines_html}</ul>
{coverage_table}
</body>
</html>
"""
