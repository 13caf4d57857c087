"""CLI contracts: subcommands, exit codes, and JSON parity with the API."""

import json

import pytest
from fastapi.testclient import TestClient

from altcut.cli import main
from altcut.jsonutil import canonical_json
from altcut.mock_backend import MockBackend
from altcut.server import create_app
from altcut.workspace import Workspace


@pytest.fixture()
def project_dir(tmp_path, demo_layout):
    srt_path = tmp_path / "demo.srt"
    srt_path.write_text(demo_layout.srt, encoding="utf-8")
    proj = tmp_path / "proj"
    code = main(
        [
            "ingest",
            str(srt_path),
            "--duration",
            str(demo_layout.duration_ms),
            "--project",
            str(proj),
        ]
    )
    assert code == 0
    return proj


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCommands:
    def test_generate_prints_ten_ids(self, project_dir, capsys):
        code, out, _ = run(
            capsys, "generate", "--stage", "rough_cut", "--project", str(project_dir)
        )
        assert code == 0
        assert out.split() == [f"v{i}" for i in range(1, 11)]

    def test_self_diff_no_changes(self, project_dir, capsys):
        run(capsys, "generate", "--stage", "rough_cut", "--project", str(project_dir))
        code, out, _ = run(
            capsys, "diff", "--a", "v1", "--b", "v1", "--project", str(project_dir)
        )
        assert code == 0
        assert out.strip() == "No changes"

    def test_edl_round_trip_structure(self, project_dir, tmp_path, capsys):
        run(capsys, "generate", "--stage", "rough_cut", "--project", str(project_dir))
        out_file = tmp_path / "v1.edl.json"
        code, _, _ = run(
            capsys,
            "export",
            "--id",
            "v1",
            "--export-format",
            "edl_json",
            "--out",
            str(out_file),
            "--project",
            str(project_dir),
        )
        assert code == 0
        from altcut.exporters import load_edl_json

        doc = json.loads(out_file.read_text())
        loaded = load_edl_json(doc)
        project = Workspace(project_dir.parent).get_project(project_dir.name)
        assert loaded == project.find_variation("v1")

    def test_list_sort_and_pin(self, project_dir, capsys):
        run(capsys, "generate", "--stage", "rough_cut", "--project", str(project_dir))
        run(capsys, "pin", "--id", "v5", "--project", str(project_dir))
        code, out, _ = run(
            capsys,
            "list",
            "--stage",
            "rough_cut",
            "--sort",
            "duration",
            "--project",
            str(project_dir),
        )
        assert code == 0
        assert out.splitlines()[0].startswith("v5")

    def test_full_pipeline(self, project_dir, capsys):
        run(capsys, "generate", "--stage", "rough_cut", "--project", str(project_dir))
        assert run(capsys, "select", "--id", "v9", "--project", str(project_dir))[0] == 0
        code, out, _ = run(
            capsys, "generate", "--stage", "broll", "--project", str(project_dir)
        )
        assert code == 0 and len(out.split()) == 10
        code, out, _ = run(
            capsys, "surprise", "--stage", "rough_cut", "--project", str(project_dir)
        )
        assert code == 0 and "novelty" in out
        code, out, _ = run(
            capsys,
            "refine",
            "--id",
            "v9",
            "--prompt",
            "Remove section 'Part 2 Of Today'",
            "--project",
            str(project_dir),
        )
        assert code == 0 and "Removed 'Part 2 Of Today'" in out

    def test_segment_command(self, project_dir, capsys):
        code, out, _ = run(capsys, "segment", "--project", str(project_dir))
        assert code == 0
        assert "Part 1 Of Today" in out


class TestExitCodes:
    def test_domain_error_exit_1(self, project_dir, capsys):
        code, _, err = run(
            capsys, "select", "--id", "ghost", "--project", str(project_dir)
        )
        assert code == 1
        assert json.loads(err)["code"] == "unknown_variation"

    def test_usage_error_exit_2(self, project_dir):
        with pytest.raises(SystemExit) as exc:
            main(["generate", "--stage", "bogus", "--project", str(project_dir)])
        assert exc.value.code == 2

    def test_missing_duration_usage_error(self, tmp_path, demo_layout):
        srt = tmp_path / "a.srt"
        srt.write_text(demo_layout.srt)
        with pytest.raises(SystemExit) as exc:
            main(["ingest", str(srt), "--project", str(tmp_path / "p")])
        assert exc.value.code == 2

    def test_parse_error_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.srt"
        bad.write_text("1\n00:00:02,000 --> 00:00:01,000\nNope.\n")
        code, _, err = run(
            capsys,
            "ingest",
            str(bad),
            "--duration",
            "5000",
            "--project",
            str(tmp_path / "p"),
        )
        assert code == 1
        assert json.loads(err)["code"] == "parse_error"


class TestJsonParityWithApi:
    def test_cli_json_matches_api_bodies(self, tmp_path, demo_layout, capsys):
        # Same fixed clock and inputs on both sides; every --format json body
        # must equal the API response byte for byte.
        srt = tmp_path / "demo.srt"
        srt.write_text(demo_layout.srt)
        proj = tmp_path / "side-cli" / "proj"
        proj.parent.mkdir()
        assert (
            main(
                [
                    "ingest",
                    str(srt),
                    "--duration",
                    str(demo_layout.duration_ms),
                    "--project",
                    str(proj),
                ]
            )
            == 0
        )
        capsys.readouterr()
        assert main(["generate", "--stage", "rough_cut", "--project", str(proj)]) == 0
        capsys.readouterr()

        api_ws = Workspace(tmp_path / "side-api", backend=MockBackend())
        client = TestClient(create_app(api_ws))
        pid = client.post(
            "/projects",
            json={"transcript": demo_layout.srt, "duration_ms": demo_layout.duration_ms},
        ).json()["project_id"]
        client.post(f"/projects/{pid}/generate?stage=rough_cut")

        checks = [
            (
                ["list", "--stage", "rough_cut", "--sort", "duration"],
                f"/projects/{pid}/variations?stage=rough_cut&sort=duration",
            ),
            (["coverage", "--stage", "rough_cut"], f"/projects/{pid}/coverage?stage=rough_cut"),
            (["diff", "--a", "v1", "--b", "v2"], f"/projects/{pid}/diff?a=v1&b=v2"),
        ]
        for cli_args, api_path in checks:
            code = main(cli_args + ["--format", "json", "--project", str(proj)])
            out = capsys.readouterr().out.strip()
            assert code == 0
            api_body = client.get(api_path).json()
            assert out == canonical_json(api_body), cli_args

    def test_event_logs_identical_across_surfaces(self, tmp_path, demo_layout):
        # Identical inputs under a fixed clock produce identical event logs.
        clock = lambda: "2020-06-01T12:00:00.000+00:00"  # noqa: E731
        ws_cli_style = Workspace(tmp_path / "w1", backend=MockBackend(), clock=clock)
        ws_api_style = Workspace(tmp_path / "w2", backend=MockBackend(), clock=clock)
        pid1 = ws_cli_style.create_project(
            demo_layout.srt, demo_layout.duration_ms, project_id="p"
        )
        ws_cli_style.generate(pid1, "rough_cut")
        ws_cli_style.set_status(pid1, "v2", "pinned")

        client = TestClient(create_app(ws_api_style))
        # The API path must mint the same project id for comparability.
        pid2 = ws_api_style.create_project(
            demo_layout.srt, demo_layout.duration_ms, project_id="p"
        )
        client.post(f"/projects/{pid2}/generate?stage=rough_cut")
        client.patch(f"/projects/{pid2}/variations/v2", json={"status": "pinned"})

        log1 = (tmp_path / "w1" / "p" / "events.jsonl").read_text()
        log2 = (tmp_path / "w2" / "p" / "events.jsonl").read_text()
        assert log1 == log2
