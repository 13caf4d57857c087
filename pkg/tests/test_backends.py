"""Backend plumbing: schema enforcement, record/replay, mock determinism."""

import json
from pathlib import Path

import pytest

from altcut.backends import (
    BackendError,
    HttpChatBackend,
    RecordingBackend,
    ReplayBackend,
    ScriptedBackend,
    checked_complete,
    response_schema_name,
    validate_message,
)
from altcut.cli import main as cli_main
from altcut.jsonutil import canonical_json
from altcut.mock_backend import MockBackend
from altcut.workspace import Workspace

DATA = Path(__file__).parent / "data"


def small_session_inputs():
    srt = (DATA / "replay_small.srt").read_text(encoding="utf-8")
    duration = int((DATA / "replay_small.duration").read_text())
    return srt, duration


class TestSchemas:
    def test_response_schema_dispatch(self):
        assert response_schema_name({"task": "segment"}) == "segment_response"
        assert response_schema_name({"task": "keywords"}) == "keywords_response"
        assert (
            response_schema_name({"task": "generate", "stage": "rough_cut"})
            == "rough_cut_payload"
        )
        assert (
            response_schema_name({"task": "edit", "stage": "broll"})
            == "effects_payload"
        )
        assert (
            response_schema_name({"task": "generate", "mode": "surprise",
                                  "stage": "broll"})
            == "candidates_response"
        )
        with pytest.raises(BackendError):
            response_schema_name({"task": "invent"})

    def test_bad_response_is_backend_error(self):
        backend = ScriptedBackend([{"sections": "not a list"}])
        with pytest.raises(BackendError, match="schema violation"):
            checked_complete(backend, {"task": "segment", "sentences": [],
                                       "source_duration_ms": 1000})

    def test_bad_request_rejected_before_send(self):
        with pytest.raises(BackendError):
            validate_message("request", {"task": "paint the fence"})


class TestMockDeterminism:
    def test_identical_inputs_identical_outputs(self, demo_transcript):
        request = {
            "task": "segment",
            "sentences": [
                {"index": s.index, "start_ms": s.interval.start_ms,
                 "end_ms": s.interval.end_ms, "text": s.text}
                for s in demo_transcript.sentences
            ],
            "source_duration_ms": demo_transcript.source_duration_ms,
        }
        first = MockBackend().complete(json.loads(json.dumps(request)))
        second = MockBackend().complete(json.loads(json.dumps(request)))
        assert canonical_json(first) == canonical_json(second)


class TestRecordReplay:
    def test_replayed_session_reproduces_state(self, tmp_path):
        srt, duration = small_session_inputs()
        replay = ReplayBackend(DATA / "replay_small.json")
        workspace = Workspace(tmp_path / "ws", backend=replay)
        pid = workspace.create_project(srt, duration, project_id="p")
        variations = workspace.generate(pid, "rough_cut")
        # The recorded session produced 3 feasible cells on this tiny source.
        assert len(variations) == 3
        mock_ws = Workspace(tmp_path / "mock", backend=MockBackend())
        mock_pid = mock_ws.create_project(srt, duration, project_id="p")
        mock_ws.generate(mock_pid, "rough_cut")
        assert (
            workspace.get_project(pid).to_dict()
            == mock_ws.get_project(mock_pid).to_dict()
        )

    def test_replay_misses_are_errors(self):
        replay = ReplayBackend(DATA / "replay_small.json")
        with pytest.raises(BackendError, match="no recorded response"):
            replay.complete({"task": "segment", "sentences": [],
                             "source_duration_ms": 123})

    def test_recording_round_trip(self, tmp_path, demo_transcript):
        path = tmp_path / "session.json"
        recorder = RecordingBackend(MockBackend(), path)
        request = {
            "task": "keywords",
            "sentences": [
                {"index": 0, "start_ms": 0, "end_ms": 1000, "text": "Nice bananas."}
            ],
        }
        live = recorder.complete(request)
        replayed = ReplayBackend(path).complete(request)
        assert live == replayed

    def test_cli_replay_backend(self, tmp_path, capsys):
        srt, duration = small_session_inputs()
        srt_path = tmp_path / "small.srt"
        srt_path.write_text(srt, encoding="utf-8")
        proj = tmp_path / "proj"
        replay_arg = f"replay:{DATA / 'replay_small.json'}"
        assert cli_main([
            "ingest", str(srt_path), "--duration", str(duration),
            "--project", str(proj), "--backend", replay_arg,
        ]) == 0
        capsys.readouterr()
        assert cli_main([
            "generate", "--stage", "rough_cut",
            "--project", str(proj), "--backend", replay_arg,
        ]) == 0
        assert len(capsys.readouterr().out.split()) == 3


class TestLiveBackendGuard:
    def test_missing_credentials_raise(self, monkeypatch):
        from altcut.backends import API_KEY_ENV

        monkeypatch.delenv(API_KEY_ENV, raising=False)
        with pytest.raises(BackendError, match=API_KEY_ENV):
            HttpChatBackend()
