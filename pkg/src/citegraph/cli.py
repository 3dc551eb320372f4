"""Command-line interface: serve the API or drive explorations headlessly.

    citegraph serve   --port 8100 --storage-dir ./shares --mode replay
    citegraph seed    9999 --out paper.citegraph.json
    citegraph expand  paper.citegraph.json --node 9999 --direction refs --n 5
    citegraph layout  paper.citegraph.json --seed 42
    citegraph export  paper.citegraph.json
    citegraph publish paper.citegraph.json --server http://localhost:8100

Client settings come from flags first, then CITEGRAPH_MODE / CITEGRAPH_FIXTURES /
CITEGRAPH_API_BASE / CITEGRAPH_API_KEY environment variables.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import CitegraphError
from .explore import CursorStore, ExpansionRequest, ExplorationEngine
from .graph import CitationNetwork
from .layout import LayoutParams, apply_positions, run_layout
from .scholar import ClientConfig, ScholarClient
from .snapshot import deserialize, serialize, snapshot_from_network

DIRECTION_ALIASES = {"refs": "references", "cites": "citations"}
STRATEGY_ALIASES = {
    "upstream": "upstream_order",
    "citation-count": "citation_count_desc",
    "recency": "recency_desc",
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CitegraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="citegraph", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_client_flags(p):
        p.add_argument("--mode", choices=["live", "replay"], help="upstream mode (default: env or live)")
        p.add_argument("--fixtures-dir", type=Path, help="recorded responses for replay mode")
        p.add_argument("--api-base", help="upstream API base URL")
        p.add_argument("--api-key", help="upstream API key")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8100)
    serve.add_argument("--storage", choices=["memory", "fs", "sqlite"], default="fs")
    serve.add_argument("--storage-dir", type=Path, default=Path("./citegraph-shares"))
    serve.add_argument("--session-ttl", type=float, default=3600.0)
    serve.add_argument("--cors-origin", action="append", default=[], dest="cors_origins")
    serve.add_argument("--base-url", help="external URL prefix used in share links")
    serve.add_argument("--ui-dir", type=Path, help="directory with the built browser UI")
    add_client_flags(serve)
    serve.set_defaults(handler=cmd_serve)

    seed = sub.add_parser("seed", help="start a snapshot file from one CorpusID")
    seed.add_argument("corpus_id", type=int)
    seed.add_argument("--out", type=Path, required=True)
    seed.add_argument("--name", default="")
    add_client_flags(seed)
    seed.set_defaults(handler=cmd_seed)

    expand = sub.add_parser("expand", help="expand one node in a snapshot file")
    expand.add_argument("file", type=Path)
    expand.add_argument("--node", type=int, required=True)
    expand.add_argument("--direction", choices=sorted(DIRECTION_ALIASES), required=True)
    expand.add_argument("--n", type=int, default=5, help="batch size (default 5)")
    expand.add_argument("--strategy", choices=sorted(STRATEGY_ALIASES), default="upstream")
    add_client_flags(expand)
    expand.set_defaults(handler=cmd_expand)

    layout = sub.add_parser("layout", help="recompute force-directed positions")
    layout.add_argument("file", type=Path)
    layout.add_argument("--seed", type=int, default=42)
    layout.add_argument("--iterations", type=int, default=300)
    layout.set_defaults(handler=cmd_layout)

    export = sub.add_parser("export", help="print the canonical snapshot JSON")
    export.add_argument("file", type=Path)
    export.add_argument("--format", choices=["json"], default="json")
    export.add_argument("--out", type=Path, help="write here instead of stdout")
    export.set_defaults(handler=cmd_export)

    publish = sub.add_parser("publish", help="upload a snapshot and print its share URL")
    publish.add_argument("file", type=Path)
    publish.add_argument("--server", required=True, help="service base URL")
    publish.set_defaults(handler=cmd_publish)

    return parser


def build_client(args) -> ScholarClient:
    overrides = {}
    if getattr(args, "mode", None):
        overrides["mode"] = args.mode
    if getattr(args, "fixtures_dir", None):
        overrides["fixtures_dir"] = args.fixtures_dir
    if getattr(args, "api_base", None):
        overrides["base_url"] = args.api_base
    if getattr(args, "api_key", None):
        overrides["api_key"] = args.api_key
    return ScholarClient(ClientConfig.from_env(**overrides))


def load_file(path: Path):
    return deserialize(path.read_bytes())


def save_file(path: Path, snapshot) -> None:
    path.write_text(serialize(snapshot) + "\n", encoding="utf-8")


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    client_overrides = {}
    if args.mode:
        client_overrides["mode"] = args.mode
    if args.fixtures_dir:
        client_overrides["fixtures_dir"] = args.fixtures_dir
    if args.api_base:
        client_overrides["base_url"] = args.api_base
    if args.api_key:
        client_overrides["api_key"] = args.api_key
    config = ServiceConfig(
        host=args.host,
        port=args.port,
        storage=args.storage,
        storage_dir=args.storage_dir,
        session_ttl=args.session_ttl,
        cors_origins=args.cors_origins,
        base_url=args.base_url,
        ui_dir=args.ui_dir,
        client=ClientConfig.from_env(**client_overrides),
    )
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def cmd_seed(args) -> int:
    client = build_client(args)
    engine = ExplorationEngine(client)
    network = CitationNetwork()
    paper = engine.seed(network, args.corpus_id)
    snapshot = snapshot_from_network(network, name=args.name or paper.title)
    save_file(args.out, snapshot)
    print(f"seeded {paper.corpus_id} ({paper.title}) -> {args.out}")
    return 0


def cmd_expand(args) -> int:
    snapshot = load_file(args.file)
    from .snapshot import network_from_snapshot

    network = network_from_snapshot(snapshot)
    cursors = CursorStore.from_cursors(snapshot.cursors)
    engine = ExplorationEngine(build_client(args))
    result = engine.expand(
        network,
        cursors,
        ExpansionRequest(
            node=args.node,
            direction=DIRECTION_ALIASES[args.direction],
            batch_size=args.n,
            strategy=STRATEGY_ALIASES[args.strategy],
        ),
    )
    updated = snapshot_from_network(
        network,
        style=snapshot.style,
        cursors=cursors.to_cursors(),
        name=snapshot.name,
        created_at=snapshot.created_at,
    )
    save_file(args.file, updated)
    status = "exhausted" if result.exhausted else f"cursor at {result.cursor}"
    print(
        f"added {len(result.added_papers)} papers, {len(result.added_edges)} edges ({status})"
    )
    return 0


def cmd_layout(args) -> int:
    snapshot = load_file(args.file)
    from .snapshot import network_from_snapshot

    network = network_from_snapshot(snapshot)
    params = LayoutParams(seed=args.seed, iterations=args.iterations)
    apply_positions(network, run_layout(network, params))
    updated = snapshot_from_network(
        network,
        style=snapshot.style,
        cursors=snapshot.cursors,
        name=snapshot.name,
        created_at=snapshot.created_at,
    )
    save_file(args.file, updated)
    print(f"layout applied to {len(network)} nodes (seed {args.seed})")
    return 0


def cmd_export(args) -> int:
    text = serialize(load_file(args.file))
    if args.out:
        args.out.write_text(text + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def cmd_publish(args) -> int:
    import httpx

    body = args.file.read_bytes()
    url = args.server.rstrip("/") + "/api/snapshots"
    response = httpx.post(url, content=body, headers={"content-type": "application/json"}, timeout=30)
    if response.status_code != 201:
        try:
            message = response.json().get("message", response.text)
        except ValueError:
            message = response.text
        print(f"error: server said {response.status_code}: {message}", file=sys.stderr)
        return 1
    payload = response.json()
    print(payload["url"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
