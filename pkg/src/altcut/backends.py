"""Pluggable analysis backends and the JSON wire contract they speak.

A backend maps one JSON request to one JSON response. Requests carry the
task, the transcript sentences with indices and timestamps, and any
constraints; responses are validated against the schemas published under
``altcut/schemas/`` before the engine touches them. A schema violation is a
backend failure, so callers always see either a well-formed response or a
:class:`BackendError`.

Shipped implementations: a record/replay pair for offline fixtures and a
thin OpenAI-compatible HTTP client for live use. The deterministic mock
lives in :mod:`altcut.mock_backend`.
"""

from __future__ import annotations

import json
import logging
import os
from importlib import resources
from pathlib import Path
from typing import Protocol, runtime_checkable

import jsonschema

from altcut.jsonutil import canonical_json

logger = logging.getLogger(__name__)

CAPABILITIES = frozenset({"segment", "keywords", "generate", "edit", "summarize"})

API_KEY_ENV = "ALTCUT_LLM_API_KEY"
BASE_URL_ENV = "ALTCUT_LLM_BASE_URL"
MODEL_ENV = "ALTCUT_LLM_MODEL"


class BackendError(RuntimeError):
    """The backend failed or returned something the schema rejects."""


@runtime_checkable
class AnalysisBackend(Protocol):
    capabilities: frozenset[str]
    concurrency_safe: bool

    def complete(self, request: dict) -> dict: ...


_SCHEMAS: dict[str, dict] = {}


def _schema(name: str) -> dict:
    if name not in _SCHEMAS:
        text = resources.files("altcut").joinpath(f"schemas/{name}.schema.json").read_text(
            encoding="utf-8"
        )
        _SCHEMAS[name] = json.loads(text)
    return _SCHEMAS[name]


def response_schema_name(request: dict) -> str:
    """Which published schema the response to this request must satisfy."""
    task = request.get("task")
    if task == "segment":
        return "segment_response"
    if task == "keywords":
        return "keywords_response"
    if task in ("generate", "edit"):
        if request.get("mode") == "surprise":
            return "candidates_response"
        if request.get("stage") == "rough_cut":
            return "rough_cut_payload"
        return "effects_payload"
    raise BackendError(f"unknown task {task!r}")


def validate_message(schema_name: str, payload: dict) -> None:
    """Check a request/response against its published schema."""
    try:
        jsonschema.validate(payload, _schema(schema_name))
    except jsonschema.ValidationError as e:
        raise BackendError(f"{schema_name} schema violation: {e.message}") from e


def checked_complete(backend: AnalysisBackend, request: dict) -> dict:
    """Run a request through a backend with both sides schema-checked."""
    validate_message("request", request)
    response = backend.complete(request)
    validate_message(response_schema_name(request), response)
    return response


class ReplayBackend:
    """Serves recorded responses; raises on any request it has not seen.

    The replay file is a JSON list of {"request": ..., "response": ...}
    exchanges. Identical requests are consumed in recorded order.
    """

    concurrency_safe = False

    def __init__(self, path: str | Path):
        self.path = Path(path)
        entries = json.loads(self.path.read_text(encoding="utf-8"))
        self._queues: dict[str, list[dict]] = {}
        capabilities = set()
        for entry in entries:
            key = canonical_json(entry["request"])
            self._queues.setdefault(key, []).append(entry["response"])
            capabilities.add(entry["request"].get("task"))
        self.capabilities = frozenset(c for c in capabilities if c in CAPABILITIES)

    def complete(self, request: dict) -> dict:
        key = canonical_json(request)
        queue = self._queues.get(key)
        if not queue:
            raise BackendError(
                f"replay file {self.path} has no recorded response for this "
                f"{request.get('task')} request"
            )
        return queue.pop(0)


class RecordingBackend:
    """Wraps a live backend and appends every exchange to a replay file."""

    def __init__(self, inner: AnalysisBackend, path: str | Path):
        self.inner = inner
        self.path = Path(path)
        self.capabilities = inner.capabilities
        self.concurrency_safe = False
        self._entries: list[dict] = []
        if self.path.exists():
            self._entries = json.loads(self.path.read_text(encoding="utf-8"))

    def complete(self, request: dict) -> dict:
        response = self.inner.complete(request)
        self._entries.append({"request": request, "response": response})
        self.path.write_text(
            json.dumps(self._entries, indent=2, sort_keys=True), encoding="utf-8"
        )
        return response


class ScriptedBackend:
    """Returns canned responses in order; handy for targeted tests."""

    concurrency_safe = False

    def __init__(self, responses: list[dict], capabilities: frozenset[str] = CAPABILITIES):
        self._responses = list(responses)
        self.capabilities = capabilities

    def complete(self, request: dict) -> dict:
        if not self._responses:
            raise BackendError("scripted backend exhausted")
        response = self._responses.pop(0)
        if isinstance(response, Exception):
            raise response
        return response


def _prompt_template(task: str) -> str:
    return resources.files("altcut").joinpath(f"prompts/{task}.txt").read_text(
        encoding="utf-8"
    )


class HttpChatBackend:
    """OpenAI-compatible chat-completions backend.

    Credentials come from ``ALTCUT_LLM_API_KEY`` (with optional
    ``ALTCUT_LLM_BASE_URL`` / ``ALTCUT_LLM_MODEL``); never required by the
    offline test suite.
    """

    capabilities = CAPABILITIES
    concurrency_safe = True

    def __init__(
        self,
        api_key: str | None = None,
        base_url: str | None = None,
        model: str | None = None,
        timeout: float = 60.0,
    ):
        self.api_key = api_key or os.environ.get(API_KEY_ENV)
        if not self.api_key:
            raise BackendError(f"live backend needs {API_KEY_ENV} set")
        self.base_url = (
            base_url or os.environ.get(BASE_URL_ENV) or "https://api.openai.com/v1"
        ).rstrip("/")
        self.model = model or os.environ.get(MODEL_ENV) or "gpt-4o"
        self.timeout = timeout

    def complete(self, request: dict) -> dict:
        import httpx

        task = request["task"]
        system = _prompt_template(task)
        body = {
            "model": self.model,
            "response_format": {"type": "json_object"},
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": json.dumps(request)},
            ],
        }
        try:
            reply = httpx.post(
                f"{self.base_url}/chat/completions",
                headers={"Authorization": f"Bearer {self.api_key}"},
                json=body,
                timeout=self.timeout,
            )
            reply.raise_for_status()
            content = reply.json()["choices"][0]["message"]["content"]
            return json.loads(content)
        except Exception as e:  # network, HTTP, and decode failures alike
            raise BackendError(f"live backend request failed: {e}") from e
