"""HTTP JSON API over a workspace.

Every mutating endpoint funnels through the workspace's single writer;
errors come back as ``{code, message, details}`` with a matching status.
"""

from __future__ import annotations

import logging
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from altcut.backends import BackendError
from altcut.exporters import ExportError
from altcut.generation import CandidateRejected, GenerationError, PreconditionError
from altcut.model import STAGES, ModelError
from altcut.organize import OrganizeError
from altcut.summaries import ChangeSummary
from altcut.transcript_io import ParseError
from altcut.validation import validate_project
from altcut.views import generate_view, recombine_view, refine_view, variations_view
from altcut.workspace import (
    UnknownProjectError,
    UnknownVariationError,
    Workspace,
    WorkspaceError,
)

logger = logging.getLogger(__name__)


class CreateProjectBody(BaseModel):
    transcript: str
    duration_ms: int = Field(gt=0)
    format: Optional[str] = None
    frame_strip: Optional[list[dict]] = None


class RefineBody(BaseModel):
    prompt: str


class RecombineBody(BaseModel):
    ids: list[str]
    prompt: str = ""


class StatusBody(BaseModel):
    status: str


class SelectBody(BaseModel):
    vid: str


def _error(status: int, code: str, message: str, details: Optional[dict] = None):
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details or {}},
    )


def _summary_view(summary: ChangeSummary) -> dict:
    return summary.to_dict()


def create_app(workspace: Workspace) -> FastAPI:
    app = FastAPI(title="altcut", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def on_bad_body(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request", "request body failed validation",
                      {"errors": exc.errors()})

    @app.exception_handler(Exception)
    async def on_domain_error(request: Request, exc: Exception):
        if isinstance(exc, (UnknownProjectError, UnknownVariationError)):
            return _error(404, exc.code, str(exc))
        if isinstance(exc, PreconditionError):
            return _error(409, "precondition_failed", str(exc))
        if isinstance(exc, CandidateRejected):
            return _error(422, "candidate_rejected", str(exc), {"reasons": exc.reasons})
        if isinstance(exc, (ParseError, ModelError, OrganizeError, ExportError,
                            WorkspaceError, GenerationError, ValueError)):
            return _error(400, "bad_request", str(exc))
        if isinstance(exc, BackendError):
            return _error(502, "backend_error", str(exc))
        logger.exception("unhandled error")
        return _error(500, "internal_error", str(exc))

    def _check_stage(stage: str) -> None:
        if stage not in STAGES:
            raise WorkspaceError(f"unknown stage {stage!r}")

    @app.post("/projects", status_code=201)
    def create_project(body: CreateProjectBody):
        pid = workspace.create_project(
            body.transcript, body.duration_ms, body.format, body.frame_strip
        )
        project = workspace.get_project(pid)
        return {
            "project_id": pid,
            "sections": [s.to_dict() for s in project.sections],
            "violations": [v.to_dict() for v in validate_project(project)],
        }

    @app.get("/projects/{pid}")
    def get_project(pid: str):
        return workspace.get_project(pid).to_dict()

    @app.post("/projects/{pid}/generate")
    def generate(pid: str, stage: str, n: int = 10):
        _check_stage(stage)
        variations = workspace.generate(pid, stage, n=n)
        return generate_view(variations)

    @app.get("/projects/{pid}/variations")
    def list_variations(
        pid: str, stage: str, sort: Optional[str] = None, dir: str = "asc"
    ):
        _check_stage(stage)
        order, variations = workspace.list_variations(pid, stage, sort, dir)
        return variations_view(order, variations)

    @app.get("/projects/{pid}/coverage")
    def coverage(pid: str, stage: str = "rough_cut"):
        _check_stage(stage)
        return workspace.coverage(pid, stage).to_dict()

    @app.get("/projects/{pid}/inclusion")
    def inclusion(pid: str, stage: str = "rough_cut"):
        _check_stage(stage)
        return workspace.inclusion(pid, stage).to_dict()

    @app.get("/projects/{pid}/diff")
    def diff(pid: str, a: str, b: str):
        return workspace.diff(pid, a, b).to_dict()

    @app.get("/projects/{pid}/summary")
    def summary(pid: str, old: str, new: str):
        return _summary_view(workspace.summary(pid, old, new))

    @app.get("/projects/{pid}/variations/{vid}/mapping")
    def mapping(pid: str, vid: str):
        return workspace.mapping(pid, vid).to_dict()

    @app.post("/projects/{pid}/variations/{vid}/refine")
    def refine(pid: str, vid: str, body: RefineBody):
        result = workspace.refine(pid, vid, body.prompt)
        return refine_view(result)

    @app.post("/projects/{pid}/recombine")
    def recombine(pid: str, body: RecombineBody):
        variation = workspace.recombine(pid, body.ids, body.prompt)
        return recombine_view(variation)

    @app.post("/projects/{pid}/surprise")
    def surprise(pid: str, stage: str):
        _check_stage(stage)
        variation = workspace.surprise(pid, stage)
        return recombine_view(variation)

    @app.patch("/projects/{pid}/variations/{vid}")
    def set_status(pid: str, vid: str, body: StatusBody):
        if body.status not in ("normal", "pinned", "archived"):
            raise WorkspaceError(f"unknown status {body.status!r}")
        order = workspace.set_status(pid, vid, body.status)
        return {"order": order}

    @app.post("/projects/{pid}/select")
    def select(pid: str, body: SelectBody):
        project = workspace.select_variation(pid, body.vid)
        return {"selected": dict(project.selected)}

    @app.get("/projects/{pid}/export/{vid}")
    def export(pid: str, vid: str, format: str, other: Optional[str] = None):
        content, media = workspace.export(pid, vid, format, other)
        if isinstance(content, dict):
            return JSONResponse(content)
        return Response(content=content, media_type=media)

    return app


def serve_api(workspace: Workspace, host: str = "127.0.0.1", port: int = 8765):
    """Run the API under uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(workspace), host=host, port=port, log_level="info")
