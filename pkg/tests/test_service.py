"""Integration tests for the HTTP service in replay mode."""

from __future__ import annotations

import json
import threading

import pytest
from fastapi.testclient import TestClient

from citegraph.scholar import ClientConfig, ScholarClient
from citegraph.service import ServiceConfig, create_app
from citegraph.snapshot import deserialize, serialize
from tests.test_snapshot import tiny_snapshot

ANCHOR = 9999


@pytest.fixture
def app_config(fixtures_dir) -> ServiceConfig:
    return ServiceConfig(client=ClientConfig(mode="replay", fixtures_dir=fixtures_dir))


@pytest.fixture
def api(app_config) -> TestClient:
    app = create_app(app_config)
    with TestClient(app) as client:
        yield client


def snapshot_bytes() -> bytes:
    return serialize(tiny_snapshot()).encode()


class TestShareEndpoints:
    def test_post_then_get_returns_canonical_bytes(self, api):
        posted = api.post("/api/snapshots", content=snapshot_bytes())
        assert posted.status_code == 201
        share_id = posted.json()["share_id"]
        assert posted.json()["url"].endswith(f"/s/{share_id}")
        got = api.get(f"/api/snapshots/{share_id}")
        assert got.status_code == 200
        assert got.content == snapshot_bytes()

    def test_same_content_same_share_id(self, api):
        first = api.post("/api/snapshots", content=snapshot_bytes()).json()["share_id"]
        second = api.post("/api/snapshots", content=snapshot_bytes()).json()["share_id"]
        assert first == second

    def test_non_canonical_input_normalized(self, api):
        doc = json.loads(snapshot_bytes())
        doc["nodes"].reverse()
        scrambled = json.dumps(doc, indent=3).encode()
        share_id = api.post("/api/snapshots", content=scrambled).json()["share_id"]
        assert api.get(f"/api/snapshots/{share_id}").content == snapshot_bytes()

    def test_invalid_snapshot_400_names_path(self, api):
        doc = json.loads(snapshot_bytes())
        doc["edges"].append({"source": 1, "target": 31337})
        response = api.post("/api/snapshots", content=json.dumps(doc).encode())
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "invalid_snapshot"
        assert body["detail"]["path"] == "edges[1].target"

    def test_oversize_snapshot_413(self, fixtures_dir):
        config = ServiceConfig(
            client=ClientConfig(mode="replay", fixtures_dir=fixtures_dir),
            max_snapshot_bytes=64,
        )
        with TestClient(create_app(config)) as api:
            response = api.post("/api/snapshots", content=snapshot_bytes())
            assert response.status_code == 413
            assert response.json()["code"] == "too_large"

    def test_unknown_share_404_structured(self, api):
        response = api.get("/api/snapshots/AAAAAAAAAAAA")
        assert response.status_code == 404
        body = response.json()
        assert set(body) == {"code", "message", "detail"}

    def test_get_twice_identical_bytes_and_etag(self, api):
        share_id = api.post("/api/snapshots", content=snapshot_bytes()).json()["share_id"]
        a = api.get(f"/api/snapshots/{share_id}")
        b = api.get(f"/api/snapshots/{share_id}")
        assert a.content == b.content
        assert a.headers["etag"] == b.headers["etag"]
        assert "immutable" in a.headers["cache-control"]


class TestEmbed:
    def test_jupyter_snippet_defaults(self, api):
        share_id = api.post("/api/snapshots", content=snapshot_bytes()).json()["share_id"]
        response = api.get(f"/embed/{share_id}/jupyter")
        assert response.status_code == 200
        text = response.text
        assert f'src="http://testserver/embed/{share_id}"' in text
        assert 'width="800"' in text and 'height="600"' in text

    def test_jupyter_snippet_custom_dimensions(self, api):
        share_id = api.post("/api/snapshots", content=snapshot_bytes()).json()["share_id"]
        text = api.get(f"/embed/{share_id}/jupyter?width=500&height=300").text
        assert 'width="500"' in text and 'height="300"' in text

    def test_embed_page_serves_html(self, api):
        share_id = api.post("/api/snapshots", content=snapshot_bytes()).json()["share_id"]
        response = api.get(f"/embed/{share_id}")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/html")
        assert "CITEGRAPH_BOOT" in response.text

    def test_embed_unknown_404(self, api):
        assert api.get("/embed/AAAAAAAAAAAA").status_code == 404
        assert api.get("/embed/AAAAAAAAAAAA/jupyter").status_code == 404


class TestSessionLifecycle:
    def test_create_blank_session(self, api):
        response = api.post("/api/sessions")
        assert response.status_code == 201
        body = response.json()
        assert body["graph"]["nodes"] == []

    def test_create_from_snapshot_preserves_sets(self, api):
        doc = json.loads(snapshot_bytes())
        response = api.post("/api/sessions", json=doc)
        graph = response.json()["graph"]
        assert {n["corpus_id"] for n in graph["nodes"]} == {1, 2}
        assert graph["edges"] == [{"source": 1, "target": 2}]

    def test_create_from_share_id(self, api):
        share_id = api.post("/api/snapshots", content=snapshot_bytes()).json()["share_id"]
        response = api.post("/api/sessions", json={"share_id": share_id})
        graph = response.json()["graph"]
        assert {n["corpus_id"] for n in graph["nodes"]} == {1, 2}

    def test_create_with_corpus_id_seeds(self, api):
        response = api.post("/api/sessions", json={"corpus_id": ANCHOR})
        graph = response.json()["graph"]
        assert [n["corpus_id"] for n in graph["nodes"]] == [ANCHOR]

    def test_unknown_session_404(self, api):
        assert api.get("/api/sessions/nope/graph").status_code == 404

    def test_expired_session_404(self, fixtures_dir):
        config = ServiceConfig(
            client=ClientConfig(mode="replay", fixtures_dir=fixtures_dir), session_ttl=0.0
        )
        with TestClient(create_app(config)) as api:
            sid = api.post("/api/sessions").json()["session_id"]
            import time

            time.sleep(0.01)
            assert api.get(f"/api/sessions/{sid}/graph").status_code == 404


class TestSessionMutations:
    def make_session(self, api) -> str:
        return api.post("/api/sessions", json={"corpus_id": ANCHOR}).json()["session_id"]

    def test_seed_endpoint(self, api):
        sid = api.post("/api/sessions").json()["session_id"]
        response = api.post(f"/api/sessions/{sid}/seed", json={"corpus_id": ANCHOR})
        assert response.status_code == 200
        assert response.json()["corpus_id"] == ANCHOR

    def test_seed_unknown_corpus_404(self, api):
        sid = api.post("/api/sessions").json()["session_id"]
        response = api.post(f"/api/sessions/{sid}/seed", json={"corpus_id": 77_777})
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"

    def test_seed_invalid_corpus_400(self, api):
        sid = api.post("/api/sessions").json()["session_id"]
        response = api.post(f"/api/sessions/{sid}/seed", json={"corpus_id": "abc"})
        assert response.status_code == 400

    def test_expand_references(self, api):
        sid = self.make_session(api)
        response = api.post(
            f"/api/sessions/{sid}/expand",
            json={"node": ANCHOR, "direction": "references", "batch_size": 5},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["result"]["added_papers"] == [1001, 1002, 1003, 1004, 1005]
        assert len(body["graph"]["nodes"]) == 6
        xs = {n["x"] for n in body["graph"]["nodes"] if n["corpus_id"] != ANCHOR}
        assert len(xs) == 1  # vertically aligned children

    def test_expand_badly_formed_400(self, api):
        sid = self.make_session(api)
        response = api.post(f"/api/sessions/{sid}/expand", json={"node": ANCHOR, "direction": "up"})
        assert response.status_code == 400

    def test_expand_unknown_node_404(self, api):
        sid = self.make_session(api)
        response = api.post(
            f"/api/sessions/{sid}/expand", json={"node": 31337, "direction": "references"}
        )
        assert response.status_code == 404

    def test_concurrent_expands_one_busy(self, fixtures_dir):
        config = ServiceConfig(client=ClientConfig(mode="replay", fixtures_dir=fixtures_dir))
        slow_client = ScholarClient(config.client)
        original = slow_client.fetch_reference_page

        import time

        def slowed(*args, **kwargs):
            time.sleep(0.3)
            return original(*args, **kwargs)

        slow_client.fetch_reference_page = slowed
        app = create_app(config, client=slow_client)
        with TestClient(app) as api:
            sid = api.post("/api/sessions", json={"corpus_id": ANCHOR}).json()["session_id"]
            payload = {"node": ANCHOR, "direction": "references"}
            statuses = []

            def hit():
                statuses.append(api.post(f"/api/sessions/{sid}/expand", json=payload).status_code)

            threads = [threading.Thread(target=hit) for _ in range(2)]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
            assert sorted(statuses) == [200, 409]

    def test_rate_limited_maps_to_429_with_hint(self, fixtures_dir):
        config = ServiceConfig(
            client=ClientConfig(mode="replay", fixtures_dir=fixtures_dir, limiter_capacity=1)
        )
        with TestClient(create_app(config)) as api:
            sid = api.post("/api/sessions", json={"corpus_id": ANCHOR}).json()["session_id"]
            response = api.post(
                f"/api/sessions/{sid}/expand", json={"node": ANCHOR, "direction": "references"}
            )
            assert response.status_code == 429
            assert "retry-after" in response.headers
            assert response.json()["detail"]["retry_after_seconds"] > 0

    def test_patch_style(self, api):
        sid = self.make_session(api)
        response = api.patch(
            f"/api/sessions/{sid}/style",
            json={"node_size_attribute": "pagerank", "mystery": 1},
        )
        assert response.status_code == 200
        assert response.json()["style"]["node_size_attribute"] == "pagerank"
        assert response.json()["ignored"] == ["mystery"]
        graph = api.get(f"/api/sessions/{sid}/graph").json()
        assert graph["style"]["node_size_attribute"] == "pagerank"

    def test_patch_style_invalid_400(self, api):
        sid = self.make_session(api)
        response = api.patch(f"/api/sessions/{sid}/style", json={"node_size_domain": [5, 1]})
        assert response.status_code == 400

    def test_layout_endpoint_moves_unpinned(self, api):
        sid = self.make_session(api)
        api.post(
            f"/api/sessions/{sid}/expand",
            json={"node": ANCHOR, "direction": "references", "batch_size": 5},
        )
        before = {n["corpus_id"]: (n["x"], n["y"]) for n in api.get(f"/api/sessions/{sid}/graph").json()["nodes"]}
        response = api.post(f"/api/sessions/{sid}/layout", json={"iterations": 50, "seed": 3})
        assert response.status_code == 200
        after = {n["corpus_id"]: (n["x"], n["y"]) for n in response.json()["graph"]["nodes"]}
        assert before != after

    def test_layout_relax_only_keeps_rest_fixed(self, api):
        sid = self.make_session(api)
        api.post(
            f"/api/sessions/{sid}/expand",
            json={"node": ANCHOR, "direction": "references", "batch_size": 5},
        )
        before = {n["corpus_id"]: (n["x"], n["y"]) for n in api.get(f"/api/sessions/{sid}/graph").json()["nodes"]}
        response = api.post(
            f"/api/sessions/{sid}/layout",
            json={"iterations": 40, "relax_only": [1001, 1002]},
        )
        after = {n["corpus_id"]: (n["x"], n["y"]) for n in response.json()["graph"]["nodes"]}
        assert after[ANCHOR] == before[ANCHOR]
        assert after[1003] == before[1003]
        assert after[1001] != before[1001]

    def test_graph_metrics_present(self, api):
        sid = self.make_session(api)
        api.post(f"/api/sessions/{sid}/expand", json={"node": ANCHOR, "direction": "references"})
        graph = api.get(f"/api/sessions/{sid}/graph").json()
        anchor = next(n for n in graph["nodes"] if n["corpus_id"] == ANCHOR)
        assert anchor["out_degree"] == 5
        assert anchor["degree"] == 5
        total = sum(n["pagerank"] for n in graph["nodes"])
        assert total == pytest.approx(1.0, abs=1e-4)  # quantized at 6 decimals


class TestRoundTripThroughService:
    def test_publish_reload_cycle(self, api):
        sid = api.post("/api/sessions", json={"corpus_id": ANCHOR}).json()["session_id"]
        api.post(f"/api/sessions/{sid}/expand", json={"node": ANCHOR, "direction": "references"})
        graph = api.get(f"/api/sessions/{sid}/graph").json()

        # client-side save: rebuild a snapshot document from the render model
        doc = {
            "version": 1,
            "name": "round trip",
            "created_at": "2026-08-10T00:00:00Z",
            "nodes": [
                {k: n[k] for k in ("corpus_id", "title", "abstract", "authors", "year",
                                   "venue", "citation_count", "url", "x", "y", "pinned")}
                for n in graph["nodes"]
            ],
            "edges": graph["edges"],
            "style": graph["style"],
            "cursors": graph["cursors"],
        }
        share_id = api.post("/api/snapshots", content=json.dumps(doc).encode()).json()["share_id"]
        reopened = api.post("/api/sessions", json={"share_id": share_id}).json()["graph"]
        assert {n["corpus_id"] for n in reopened["nodes"]} == {n["corpus_id"] for n in graph["nodes"]}
        assert reopened["edges"] == graph["edges"]
        # cursor survives: next expand continues paging rather than repeating
        sid2 = api.post("/api/sessions", json={"share_id": share_id}).json()["session_id"]
        result = api.post(
            f"/api/sessions/{sid2}/expand", json={"node": ANCHOR, "direction": "references"}
        ).json()["result"]
        assert result["added_papers"] == [1006, 1007, 1008, 1009, 1010]


class TestErrorShape:
    def test_all_4xx_are_structured(self, api):
        cases = [
            api.get("/api/snapshots/AAAAAAAAAAAA"),
            api.get("/api/sessions/zzz/graph"),
            api.post("/api/snapshots", content=b"{nope"),
            api.get("/api/nothing-here"),
        ]
        for response in cases:
            assert 400 <= response.status_code < 500
            assert response.headers["content-type"].startswith("application/json")
            body = response.json()
            assert set(body) == {"code", "message", "detail"}

    def test_parse_error_includes_position(self, api):
        response = api.post("/api/snapshots", content=b'{"version": 1,,}')
        assert response.status_code == 400
        assert response.json()["detail"]["line"] == 1

    def test_health(self, api):
        body = api.get("/api/health").json()
        assert body["status"] == "ok"
        assert body["mode"] == "replay"
