#!/usr/bin/env python3
"""Freeze engine outputs as fixtures for the frontend test suite.

Writes frontend/tests/fixtures/:
  - style_parity.json: 20 random (value, domain, range) triples with the
    engine's apply_style size and color outputs;
  - ui_flow.json: real replay-mode API payloads for the session flow the UI
    tests drive (create, seed, expand x2, citations, publish, reopen).

Run from the repo root after changing the engine or the fixture corpus:
    python3 tools/gen_ui_fixtures.py
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from fastapi.testclient import TestClient

from citegraph.scholar import ClientConfig
from citegraph.service import ServiceConfig, create_app
from citegraph.snapshot import apply_style, apply_style_color

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "frontend" / "tests" / "fixtures"


def style_parity() -> dict:
    rng = random.Random(90210)
    triples = []
    for _ in range(20):
        lo_d = round(rng.uniform(-500, 500), 3)
        hi_d = round(lo_d + rng.uniform(0.5, 2000), 3)
        lo_r = round(rng.uniform(1, 10), 3)
        hi_r = round(lo_r + rng.uniform(0.1, 40), 3)
        value = round(rng.uniform(lo_d - 300, hi_d + 300), 3)
        colors = [f"#{rng.randrange(16**6):06x}" for _ in range(2)]
        triples.append(
            {
                "value": value,
                "domain": [lo_d, hi_d],
                "size_range": [lo_r, hi_r],
                "color_range": colors,
                "expected_size": apply_style(value, (lo_d, hi_d), (lo_r, hi_r)),
                "expected_color": apply_style_color(value, (lo_d, hi_d), (colors[0], colors[1])),
            }
        )
    return {"triples": triples}


def ui_flow() -> dict:
    config = ServiceConfig(client=ClientConfig(mode="replay", fixtures_dir=ROOT / "fixtures"))
    flow: dict = {}
    with TestClient(create_app(config)) as api:
        created = api.post("/api/sessions", json={"corpus_id": 9999})
        flow["session_seeded"] = created.json()
        sid = created.json()["session_id"]

        first = api.post(
            f"/api/sessions/{sid}/expand",
            json={"node": 9999, "direction": "references", "batch_size": 5},
        )
        flow["expand_refs_1"] = first.json()
        second = api.post(
            f"/api/sessions/{sid}/expand",
            json={"node": 9999, "direction": "references", "batch_size": 5},
        )
        flow["expand_refs_2"] = second.json()
        cites = api.post(
            f"/api/sessions/{sid}/expand",
            json={"node": 9999, "direction": "citations", "batch_size": 5},
        )
        flow["expand_cites"] = cites.json()

        graph = api.get(f"/api/sessions/{sid}/graph").json()
        flow["graph_final"] = graph

        doc = {
            "version": 1,
            "name": "ui flow",
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
        published = api.post("/api/snapshots", content=json.dumps(doc).encode())
        flow["publish_response"] = published.json()
        share_id = published.json()["share_id"]
        flow["snapshot_bytes"] = api.get(f"/api/snapshots/{share_id}").text
        flow["session_reopened"] = api.post("/api/sessions", json={"share_id": share_id}).json()
        flow["jupyter_snippet"] = api.get(f"/embed/{share_id}/jupyter").text
    return flow


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "style_parity.json").write_text(json.dumps(style_parity(), indent=2) + "\n")
    (OUT / "ui_flow.json").write_text(json.dumps(ui_flow(), indent=2) + "\n")
    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main()
