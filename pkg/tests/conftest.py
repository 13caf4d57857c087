import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixtures import TINY_SRT, build_demo_layout  # noqa: E402

from altcut.backends import BackendError
from altcut.mock_backend import MockBackend
from altcut.transcript_io import ingest_transcript
from altcut.workspace import Workspace


class FailingBackend:
    """Always fails; exercises every fallback path."""

    capabilities = frozenset()
    concurrency_safe = True

    def complete(self, request):
        raise BackendError("backend is down")


class FuzzBackend:
    """Adversarial backend emitting arbitrary (seeded) garbage boundaries."""

    capabilities = frozenset({"segment", "keywords", "generate", "edit"})
    concurrency_safe = False

    def __init__(self, rng):
        self.rng = rng

    def complete(self, request):
        task = request["task"]
        duration = request.get("source_duration_ms", 60_000)
        if task == "segment":
            n = self.rng.randint(1, 8)
            return {
                "sections": [
                    {
                        "start_ms": self.rng.randint(-5000, duration + 5000),
                        "title": f"fuzz {i}",
                    }
                    for i in range(n)
                ]
            }
        if task == "keywords":
            rows = []
            for row in request["sentences"]:
                words = row["text"].split()
                picks = []
                if words and self.rng.random() < 0.7:
                    picks.append(self.rng.choice(words))
                if self.rng.random() < 0.3:
                    picks.append("hallucinated-keyword")
                rows.append(picks)
            return {"keywords_by_sentence": rows}
        if task in ("generate", "edit"):
            if request.get("mode") == "surprise":
                return {"candidates": [self._payload(request, duration)]}
            return self._payload(request, duration)
        raise BackendError(f"fuzz backend: unknown task {task}")

    def _payload(self, request, duration):
        if request["stage"] == "rough_cut":
            spans = []
            for _ in range(self.rng.randint(0, 6)):
                a = self.rng.randint(-2000, duration + 2000)
                b = a + self.rng.randint(-1000, duration // 2)
                spans.append([a, b])
            return {"spans": spans}
        placements = []
        n_sentences = len(request["sentences"])
        for _ in range(self.rng.randint(0, 12)):
            placements.append(
                {
                    "sentence_index": self.rng.randint(-2, n_sentences + 2),
                    "keyword": self.rng.choice(
                        ["bananas", "ghost keyword", "campus", "xyz"]
                    ),
                    ("media_type" if request["stage"] == "broll" else "style"): (
                        self.rng.choice(["illustration", "photo", "video"])
                        if request["stage"] == "broll"
                        else self.rng.choice(["lower_third", "title", "subtitle"])
                    ),
                }
            )
        return {"placements": placements}


@pytest.fixture(scope="session")
def demo_layout():
    return build_demo_layout()


@pytest.fixture(scope="session")
def demo_transcript(demo_layout):
    return ingest_transcript(demo_layout.srt, demo_layout.duration_ms)


@pytest.fixture()
def tiny_srt():
    return TINY_SRT


@pytest.fixture()
def workspace(tmp_path):
    return Workspace(tmp_path / "ws", backend=MockBackend())


@pytest.fixture()
def demo_project(workspace, demo_layout):
    pid = workspace.create_project(
        demo_layout.srt, demo_layout.duration_ms, project_id="demo"
    )
    return workspace, pid
