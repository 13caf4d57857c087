"""Headless driver for the whole pipeline.

Every operation the API offers is reachable from the shell, with the mock
backend as the default so a full session runs offline:

    altcut ingest talk.srt --duration 600000 --project ./demo
    altcut generate --stage rough_cut --project ./demo
    altcut list --stage rough_cut --sort duration --project ./demo
    altcut diff --a v1 --b v2 --project ./demo
    altcut export --id v1 --format edl_json --project ./demo

``--project`` names one project directory; ``--format json`` emits the same
canonical JSON bodies as the HTTP API. Exit codes: 0 success, 1 domain
error (structured JSON on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from altcut.backends import BackendError, HttpChatBackend, ReplayBackend
from altcut.exporters import ExportError
from altcut.generation import CandidateRejected, GenerationError, PreconditionError
from altcut.jsonutil import canonical_json
from altcut.mock_backend import MockBackend
from altcut.model import ModelError
from altcut.organize import OrganizeError
from altcut.transcript_io import ParseError
from altcut.validation import validate_project
from altcut.views import generate_view, recombine_view, refine_view, variations_view
from altcut.workspace import (
    UnknownProjectError,
    UnknownVariationError,
    Workspace,
    WorkspaceError,
)


class CliError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


def _build_backend(spec: str):
    if spec == "mock":
        return MockBackend()
    if spec.startswith("replay:"):
        return ReplayBackend(spec.split(":", 1)[1])
    if spec == "live":
        return HttpChatBackend()
    raise CliError("bad_backend", f"unknown backend {spec!r}; use mock, replay:<file>, or live")


def _workspace(args) -> tuple[Workspace, str]:
    project_path = Path(args.project).resolve()
    workspace = Workspace(project_path.parent, backend=_build_backend(args.backend))
    return workspace, project_path.name


def _emit(args, document: dict, text: str) -> None:
    if getattr(args, "format", "text") == "json":
        print(canonical_json(document))
    else:
        print(text)


def _seconds(ms: int) -> str:
    return f"{ms / 1000:.1f}s"


# ---------------------------------------------------------------------------
# Subcommand handlers


def cmd_ingest(args) -> int:
    workspace, pid = _workspace(args)
    raw = Path(args.transcript).read_text(encoding="utf-8")
    frame_strip = None
    if args.frame_strip:
        frame_strip = json.loads(Path(args.frame_strip).read_text(encoding="utf-8"))
    workspace.create_project(
        raw, args.duration, args.transcript_format, frame_strip, project_id=pid
    )
    project = workspace.get_project(pid)
    violations = validate_project(project)
    document = {
        "project_id": pid,
        "sections": [s.to_dict() for s in project.sections],
        "violations": [v.to_dict() for v in violations],
    }
    lines = [f"project {pid}: {len(project.transcript.sentences)} sentences, "
             f"{len(project.sections)} sections"]
    lines += [
        f"  [{sec.color_index}] {sec.title} "
        f"({_seconds(sec.interval.duration_ms)})"
        for sec in project.sections
    ]
    _emit(args, document, "\n".join(lines))
    return 0


def cmd_segment(args) -> int:
    workspace, pid = _workspace(args)
    project = workspace.resegment(pid)
    document = {"sections": [s.to_dict() for s in project.sections]}
    lines = [
        f"[{sec.color_index}] {sec.title} ({_seconds(sec.interval.duration_ms)})"
        for sec in project.sections
    ]
    _emit(args, document, "\n".join(lines))
    return 0


def cmd_generate(args) -> int:
    workspace, pid = _workspace(args)
    variations = workspace.generate(pid, args.stage, n=args.n)
    document = generate_view(variations)
    _emit(args, document, "\n".join(v.id for v in variations))
    return 0


def cmd_list(args) -> int:
    workspace, pid = _workspace(args)
    order, variations = workspace.list_variations(pid, args.stage, args.sort, args.dir)
    document = variations_view(order, variations)
    lines = []
    for v in variations:
        if v.stage == "rough_cut":
            detail = f"duration {_seconds(v.rough_cut.edited_duration_ms)}"
        else:
            detail = f"{len(v.placements)} effects"
        lines.append(f"{v.id}\t{v.status}\t{detail}")
    _emit(args, document, "\n".join(lines))
    return 0


def cmd_coverage(args) -> int:
    workspace, pid = _workspace(args)
    matrix = workspace.coverage(pid, args.stage)
    document = matrix.to_dict()
    project = workspace.get_project(pid)
    titles = {s.id: s.title for s in project.sections}
    lines = ["variation\t" + "\t".join(titles[sid] for sid in matrix.section_ids)]
    for vid in matrix.variation_ids:
        row = [f"{matrix.cell(vid, sid).fraction:.2f}" for sid in matrix.section_ids]
        lines.append(vid + "\t" + "\t".join(row))
    _emit(args, document, "\n".join(lines))
    return 0


def cmd_diff(args) -> int:
    workspace, pid = _workspace(args)
    if args.format == "html":
        content, _ = workspace.export(pid, args.a, "diff_html", other_id=args.b)
        print(content)
        return 0
    report = workspace.diff(pid, args.a, args.b)
    summary = workspace.summary(pid, args.b, args.a)  # b is the baseline
    if args.format == "json":
        print(canonical_json(report.to_dict()))
    else:
        print("\n".join(summary.lines))
    return 0


def cmd_refine(args) -> int:
    workspace, pid = _workspace(args)
    result = workspace.refine(pid, args.id, args.prompt)
    document = refine_view(result)
    lines = [f"created {result.variation.id}"] + list(result.summary.lines)
    if result.no_change:
        lines.append("warning: the prompt produced no change")
    _emit(args, document, "\n".join(lines))
    return 0


def cmd_recombine(args) -> int:
    workspace, pid = _workspace(args)
    ids = [part.strip() for part in args.ids.split(",") if part.strip()]
    variation = workspace.recombine(pid, ids, args.prompt)
    _emit(args, recombine_view(variation), f"created {variation.id}")
    return 0


def cmd_surprise(args) -> int:
    workspace, pid = _workspace(args)
    variation = workspace.surprise(pid, args.stage)
    novelty = variation.provenance.novelty
    _emit(
        args,
        recombine_view(variation),
        f"created {variation.id} (novelty {novelty:.3f})",
    )
    return 0


def _cmd_status(args, status: str) -> int:
    workspace, pid = _workspace(args)
    order = workspace.set_status(pid, args.id, status)
    _emit(args, {"order": order}, " ".join(order))
    return 0


def cmd_select(args) -> int:
    workspace, pid = _workspace(args)
    project = workspace.select_variation(pid, args.id)
    _emit(args, {"selected": dict(project.selected)},
          f"selected {args.id}")
    return 0


def cmd_export(args) -> int:
    workspace, pid = _workspace(args)
    content, _media = workspace.export(pid, args.id, args.export_format, args.other)
    rendered = canonical_json(content) if isinstance(content, dict) else content
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(rendered)
    return 0


def cmd_serve(args) -> int:
    from altcut.server import serve_api

    workspace = Workspace(Path(args.root), backend=_build_backend(args.backend))
    serve_api(workspace, host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altcut",
        description="Generate, align, diff, and curate alternative video edits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    base = argparse.ArgumentParser(add_help=False)
    base.add_argument("--project", required=True, help="project directory")
    base.add_argument(
        "--backend", default="mock", help="mock | replay:<file> | live"
    )
    common = argparse.ArgumentParser(add_help=False, parents=[base])
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("ingest", parents=[common], help="create a project from a transcript")
    p.add_argument("transcript", help="SRT, WebVTT, or JSON word-list file")
    p.add_argument("--duration", type=int, required=True, help="source duration in ms")
    p.add_argument("--transcript-format", choices=("srt", "vtt", "json"))
    p.add_argument("--frame-strip", help="JSON file of {at_ms, image_ref} entries")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("segment", parents=[common], help="recompute sections and keywords")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("generate", parents=[common], help="generate stage variations")
    p.add_argument("--stage", required=True, choices=("rough_cut", "broll", "text_effects"))
    p.add_argument("--n", type=int, default=10)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("list", parents=[common], help="list variations in sorted order")
    p.add_argument("--stage", required=True, choices=("rough_cut", "broll", "text_effects"))
    p.add_argument("--sort")
    p.add_argument("--dir", choices=("asc", "desc"), default="asc")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("coverage", parents=[common], help="per-section coverage matrix")
    p.add_argument("--stage", default="rough_cut",
                   choices=("rough_cut", "broll", "text_effects"))
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("diff", parents=[base], help="compare two variations")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--format", choices=("text", "json", "html"), default="text")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("refine", parents=[common], help="edit a variation with a prompt")
    p.add_argument("--id", required=True)
    p.add_argument("--prompt", required=True)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("recombine", parents=[common], help="merge variations by id")
    p.add_argument("--ids", required=True, help="comma-separated variation ids")
    p.add_argument("--prompt", default="")
    p.set_defaults(func=cmd_recombine)

    p = sub.add_parser("surprise", parents=[common], help="generate a maximally novel variation")
    p.add_argument("--stage", required=True, choices=("rough_cut", "broll", "text_effects"))
    p.set_defaults(func=cmd_surprise)

    p = sub.add_parser("pin", parents=[common], help="pin a variation to the top")
    p.add_argument("--id", required=True)
    p.set_defaults(func=lambda a: _cmd_status(a, "pinned"))

    p = sub.add_parser("unpin", parents=[common], help="return a variation to normal order")
    p.add_argument("--id", required=True)
    p.set_defaults(func=lambda a: _cmd_status(a, "normal"))

    p = sub.add_parser("archive", parents=[common], help="archive a variation to the bottom")
    p.add_argument("--id", required=True)
    p.set_defaults(func=lambda a: _cmd_status(a, "archived"))

    p = sub.add_parser("select", parents=[common], help="choose the variation for the next stage")
    p.add_argument("--id", required=True)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("export", parents=[common], help="export a variation")
    p.add_argument("--id", required=True)
    p.add_argument("--export-format", dest="export_format", required=True,
                   choices=("edl_json", "srt", "diff_html"))
    p.add_argument("--other", help="baseline variation id for diff_html")
    p.add_argument("--out", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--root", required=True, help="workspace root directory")
    p.add_argument("--backend", default="mock")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=cmd_serve)

    return parser


_ERROR_CODES = {
    UnknownProjectError: "unknown_project",
    UnknownVariationError: "unknown_variation",
    PreconditionError: "precondition_failed",
    CandidateRejected: "candidate_rejected",
    ParseError: "parse_error",
    ModelError: "model_error",
    OrganizeError: "bad_sort",
    ExportError: "export_error",
    BackendError: "backend_error",
    GenerationError: "generation_error",
    WorkspaceError: "workspace_error",
}


def _error_code(exc: Exception) -> str:
    for kind, code in _ERROR_CODES.items():
        if isinstance(exc, kind):
            return code
    return "error"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(canonical_json({"code": e.code, "message": str(e)}), file=sys.stderr)
        return 1
    except Exception as e:
        print(
            canonical_json({"code": _error_code(e), "message": str(e)}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
