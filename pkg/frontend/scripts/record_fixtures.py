#!/usr/bin/env python3
"""Record real API responses into frontend/fixtures/.

Runs the engine offline (mock backend, fixed clock) against the demo
transcript and snapshots the JSON bodies the UI consumes, so the frontend
contract tests exercise exactly what the API serves.

Usage: python3 frontend/scripts/record_fixtures.py
"""

import json
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(REPO / "tests"))

from fastapi.testclient import TestClient  # noqa: E402
from fixtures import build_demo_layout  # noqa: E402

from altcut.mock_backend import MockBackend  # noqa: E402
from altcut.server import create_app  # noqa: E402
from altcut.workspace import Workspace  # noqa: E402

OUT = REPO / "frontend" / "fixtures"


def record(client, path: str, name: str):
    response = client.get(path)
    response.raise_for_status()
    (OUT / f"{name}.json").write_text(
        json.dumps(response.json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"recorded {name}.json <- {path}")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    layout = build_demo_layout()
    workspace = Workspace(
        tempfile.mkdtemp(),
        backend=MockBackend(),
        clock=lambda: "2026-01-01T00:00:00.000+00:00",
    )
    client = TestClient(create_app(workspace))

    pid = workspace.create_project(layout.srt, layout.duration_ms, project_id="demo")
    client.post(f"/projects/{pid}/generate?stage=rough_cut")
    client.post(f"/projects/{pid}/select", json={"vid": "v9"})
    client.post(f"/projects/{pid}/generate?stage=broll")

    record(client, f"/projects/{pid}", "project")
    record(
        client,
        f"/projects/{pid}/variations?stage=rough_cut&sort=duration",
        "variations_rough_cut",
    )
    record(client, f"/projects/{pid}/variations?stage=broll", "variations_broll")
    record(client, f"/projects/{pid}/coverage?stage=rough_cut", "coverage_rough_cut")
    record(client, f"/projects/{pid}/inclusion?stage=rough_cut", "inclusion_rough_cut")
    record(client, f"/projects/{pid}/variations/v1/mapping", "mapping_v1")
    record(client, f"/projects/{pid}/variations/v9/mapping", "mapping_v9")
    record(client, f"/projects/{pid}/summary?old=v1&new=v2", "summary_v1_v2")


if __name__ == "__main__":
    main()
