"""CLI tests, run in-process against the replay corpus."""

from __future__ import annotations

import json
import socket
import threading
import time

import pytest
import uvicorn

from citegraph.cli import main
from citegraph.scholar import ClientConfig
from citegraph.service import ServiceConfig, create_app
from citegraph.snapshot import deserialize

ANCHOR = 9999


def run_cli(*argv) -> int:
    return main([str(a) for a in argv])


@pytest.fixture
def replay_flags(fixtures_dir):
    return ["--mode", "replay", "--fixtures-dir", fixtures_dir]


class TestSeedCommand:
    def test_seed_writes_snapshot_file(self, tmp_path, replay_flags, capsys):
        out = tmp_path / "seed.citegraph.json"
        assert run_cli("seed", ANCHOR, "--out", out, *replay_flags) == 0
        snapshot = deserialize(out.read_bytes())
        assert snapshot.node_ids() == [ANCHOR]
        assert "9999" in capsys.readouterr().out

    def test_seed_unknown_id_fails(self, tmp_path, replay_flags, capsys):
        out = tmp_path / "x.json"
        assert run_cli("seed", 77777, "--out", out, *replay_flags) == 1
        assert "error:" in capsys.readouterr().err
        assert not out.exists()


class TestExpandCommand:
    def test_expand_adds_batch_and_saves_cursor(self, tmp_path, replay_flags, capsys):
        out = tmp_path / "net.citegraph.json"
        run_cli("seed", ANCHOR, "--out", out, *replay_flags)
        assert run_cli("expand", out, "--node", ANCHOR, "--direction", "refs", *replay_flags) == 0
        snapshot = deserialize(out.read_bytes())
        assert len(snapshot.nodes) == 6
        assert len(snapshot.edges) == 5
        assert snapshot.cursors[0].offset == 5
        assert "added 5 papers" in capsys.readouterr().out

    def test_expand_resumes_from_file_cursor(self, tmp_path, replay_flags):
        out = tmp_path / "net.citegraph.json"
        run_cli("seed", ANCHOR, "--out", out, *replay_flags)
        for _ in range(3):
            run_cli("expand", out, "--node", ANCHOR, "--direction", "refs", *replay_flags)
        snapshot = deserialize(out.read_bytes())
        assert len(snapshot.nodes) == 13  # all 12 references found exactly once
        assert len(snapshot.edges) == 12

    def test_expand_citations_direction(self, tmp_path, replay_flags):
        out = tmp_path / "net.citegraph.json"
        run_cli("seed", ANCHOR, "--out", out, *replay_flags)
        run_cli("expand", out, "--node", ANCHOR, "--direction", "cites", *replay_flags)
        snapshot = deserialize(out.read_bytes())
        assert all(e.target == ANCHOR for e in snapshot.edges)


class TestLayoutCommand:
    def test_layout_is_deterministic(self, tmp_path, replay_flags):
        a = tmp_path / "a.json"
        run_cli("seed", ANCHOR, "--out", a, *replay_flags)
        run_cli("expand", a, "--node", ANCHOR, "--direction", "refs", *replay_flags)
        b = tmp_path / "b.json"
        b.write_bytes(a.read_bytes())
        assert run_cli("layout", a, "--seed", 7) == 0
        assert run_cli("layout", b, "--seed", 7) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_layout_seed_matters_for_unplaced_nodes(self, tmp_path):
        # all nodes at the origin: starts come from the seeded generator
        doc = {
            "version": 1,
            "name": "pile",
            "created_at": "2026-01-01T00:00:00Z",
            "nodes": [
                {"corpus_id": cid, "title": f"P{cid}", "x": 0.0, "y": 0.0, "pinned": False}
                for cid in (1, 2, 3)
            ],
            "edges": [{"source": 1, "target": 2}],
            "style": {},
            "cursors": [],
        }
        a = tmp_path / "a.json"
        a.write_text(json.dumps(doc))
        b = tmp_path / "b.json"
        b.write_text(json.dumps(doc))
        run_cli("layout", a, "--seed", 1)
        run_cli("layout", b, "--seed", 2)
        assert a.read_bytes() != b.read_bytes()


class TestExportCommand:
    def test_export_prints_canonical_json(self, tmp_path, replay_flags, capsys):
        out = tmp_path / "net.json"
        run_cli("seed", ANCHOR, "--out", out, *replay_flags)
        capsys.readouterr()
        assert run_cli("export", out) == 0
        printed = capsys.readouterr().out.strip()
        assert json.loads(printed)["nodes"][0]["corpus_id"] == ANCHOR
        assert printed == out.read_text().strip()

    def test_export_rejects_invalid_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        assert run_cli("export", bad) == 1
        assert "error:" in capsys.readouterr().err


@pytest.fixture
def live_server(fixtures_dir, tmp_path):
    """Real uvicorn server on a loopback port, replay client underneath."""
    port = _free_port()
    config = ServiceConfig(
        storage="fs",
        storage_dir=tmp_path / "shares",
        client=ClientConfig(mode="replay", fixtures_dir=fixtures_dir),
    )
    server = uvicorn.Server(
        uvicorn.Config(create_app(config), host="127.0.0.1", port=port, log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("server did not start")
        time.sleep(0.02)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class TestPublishCommand:
    def test_publish_prints_share_url(self, tmp_path, replay_flags, live_server, capsys):
        out = tmp_path / "net.json"
        run_cli("seed", ANCHOR, "--out", out, *replay_flags)
        capsys.readouterr()
        assert run_cli("publish", out, "--server", live_server) == 0
        url = capsys.readouterr().out.strip()
        assert "/s/" in url

        import httpx

        share_id = url.rsplit("/", 1)[-1]
        fetched = httpx.get(f"{live_server}/api/snapshots/{share_id}")
        assert fetched.status_code == 200
        assert deserialize(fetched.content) == deserialize(out.read_bytes())

    def test_publish_invalid_file_reports_server_message(self, tmp_path, live_server, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"version": 99}')
        assert run_cli("publish", bad, "--server", live_server) == 1
        assert "server said 400" in capsys.readouterr().err
