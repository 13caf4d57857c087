"""HTTP API contracts: happy paths, error shapes, and writer serialization."""

import threading

import pytest
from fastapi.testclient import TestClient

from altcut.server import create_app
from altcut.workspace import Workspace
from altcut.mock_backend import MockBackend


@pytest.fixture()
def client(tmp_path):
    workspace = Workspace(tmp_path / "ws", backend=MockBackend())
    app = create_app(workspace)
    return TestClient(app, raise_server_exceptions=False)


@pytest.fixture()
def project(client, demo_layout):
    r = client.post(
        "/projects",
        json={"transcript": demo_layout.srt, "duration_ms": demo_layout.duration_ms},
    )
    assert r.status_code == 201
    return r.json()["project_id"]


class TestEndpoints:
    def test_create_reports_sections_and_no_violations(self, client, demo_layout):
        r = client.post(
            "/projects",
            json={"transcript": demo_layout.srt, "duration_ms": demo_layout.duration_ms},
        )
        body = r.json()
        assert r.status_code == 201
        assert len(body["sections"]) == 10
        assert body["violations"] == []

    def test_empty_project_variations(self, client, project):
        r = client.get(f"/projects/{project}/variations?stage=rough_cut")
        assert r.status_code == 200
        assert r.json() == {"order": [], "variations": []}

    def test_generate_then_sort(self, client, project):
        assert client.post(f"/projects/{project}/generate?stage=rough_cut").status_code == 200
        r = client.get(
            f"/projects/{project}/variations?stage=rough_cut&sort=duration&dir=desc"
        )
        durations = [
            sum(b - a for a, b in v["payload"]["spans"])
            for v in r.json()["variations"]
        ]
        assert durations == sorted(durations, reverse=True)

    def test_coverage_and_diff(self, client, project):
        client.post(f"/projects/{project}/generate?stage=rough_cut")
        cov = client.get(f"/projects/{project}/coverage?stage=rough_cut").json()
        assert len(cov["variations"]) == 10
        diff = client.get(f"/projects/{project}/diff?a=v1&b=v1").json()
        assert diff["only_in_a"] == [] and diff["only_in_b"] == []

    def test_refine_recombine_surprise(self, client, project):
        client.post(f"/projects/{project}/generate?stage=rough_cut")
        r = client.post(
            f"/projects/{project}/variations/v10/refine",
            json={"prompt": "Remove section 'Part 2 Of Today'"},
        )
        assert r.status_code == 200
        assert any("Removed" in line for line in r.json()["summary"]["lines"])
        r = client.post(
            f"/projects/{project}/recombine", json={"ids": ["v1", "v2"], "prompt": "mix"}
        )
        assert r.status_code == 200
        r = client.post(f"/projects/{project}/surprise?stage=rough_cut")
        assert r.status_code == 200
        assert r.json()["variation"]["provenance"]["kind"] == "surprise"
        assert "novelty" in r.json()["variation"]["provenance"]

    def test_status_and_select(self, client, project):
        client.post(f"/projects/{project}/generate?stage=rough_cut")
        r = client.patch(
            f"/projects/{project}/variations/v5", json={"status": "pinned"}
        )
        assert r.json()["order"][0] == "v5"
        r = client.post(f"/projects/{project}/select", json={"vid": "v9"})
        assert r.json()["selected"]["rough_cut"] == "v9"

    def test_exports(self, client, project):
        client.post(f"/projects/{project}/generate?stage=rough_cut")
        assert (
            client.get(f"/projects/{project}/export/v1?format=edl_json").status_code
            == 200
        )
        srt = client.get(f"/projects/{project}/export/v1?format=srt")
        assert srt.headers["content-type"].startswith("application/x-subrip")
        html = client.get(
            f"/projects/{project}/export/v1?format=diff_html&other=v2"
        )
        assert html.headers["content-type"].startswith("text/html")

    def test_mapping_and_inclusion(self, client, project):
        client.post(f"/projects/{project}/generate?stage=rough_cut")
        mapping = client.get(f"/projects/{project}/variations/v1/mapping").json()
        assert mapping["pieces"]
        inclusion = client.get(f"/projects/{project}/inclusion?stage=rough_cut").json()
        assert set(inclusion["cells"]) == {f"v{i}" for i in range(1, 11)}


class TestErrors:
    def test_unknown_project_404(self, client):
        r = client.get("/projects/nope/variations?stage=rough_cut")
        assert r.status_code == 404
        assert r.json()["code"] == "unknown_project"

    def test_unknown_variation_404(self, client, project):
        r = client.get(f"/projects/{project}/diff?a=v1&b=v2")
        assert r.status_code == 404
        assert r.json()["code"] == "unknown_variation"

    def test_malformed_body_400(self, client, project):
        r = client.post(
            "/projects", content=b"{oops",
            headers={"content-type": "application/json"},
        )
        assert r.status_code == 400
        assert r.json()["code"] == "bad_request"
        assert "details" in r.json()

    def test_missing_prerequisite_409(self, client, project):
        r = client.post(f"/projects/{project}/generate?stage=broll")
        assert r.status_code == 409
        assert r.json()["code"] == "precondition_failed"

    def test_bad_stage_400(self, client, project):
        r = client.post(f"/projects/{project}/generate?stage=final_cut")
        assert r.status_code == 400

    def test_bad_status_value_400(self, client, project):
        client.post(f"/projects/{project}/generate?stage=rough_cut")
        r = client.patch(f"/projects/{project}/variations/v1", json={"status": "starred"})
        assert r.status_code == 400


class TestWriterSerialization:
    def test_concurrent_mutations_all_apply(self, client, project):
        client.post(f"/projects/{project}/generate?stage=rough_cut")
        results = []

        def refine():
            results.append(
                client.post(
                    f"/projects/{project}/variations/v10/refine",
                    json={"prompt": "Remove section 'Part 7 Of Today'"},
                ).status_code
            )

        def pin():
            results.append(
                client.patch(
                    f"/projects/{project}/variations/v2", json={"status": "pinned"}
                ).status_code
            )

        threads = [threading.Thread(target=refine), threading.Thread(target=pin)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert results == [200, 200] or sorted(results) == [200, 200]
