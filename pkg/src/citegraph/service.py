"""HTTP service: session API, snapshot sharing, and IFrame embeds.

One process serves everything: the JSON API under /api, share embeds under
/embed, and (when built) the browser UI at / with client-side routes like
/s/{share_id}. Every 4xx/5xx body is a structured JSON error
``{"code", "message", "detail"}``.

Sessions hold server-side state (network, style, cursors) and serialize
their mutations: a second concurrent mutating call gets 409 Busy. The
scholar client and its rate limiter are shared process-wide, so the upstream
quota is respected no matter how many sessions are active.
"""

from __future__ import annotations

import logging
import secrets
import threading
import time
from dataclasses import dataclass, field, fields as dataclass_fields
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, HTMLResponse, JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import snapshot as snapshot_format
from .errors import (
    Busy,
    CitegraphError,
    EmptyNetwork,
    InvalidPaper,
    InvalidSnapshot,
    MalformedResponse,
    MissingEndpoint,
    NotFound,
    ParseError,
    RateLimited,
    SelfLoopRejected,
    SnapshotTooLarge,
    StorageError,
    UnknownPaper,
    UnknownSession,
    UnknownShareId,
    UnsupportedVersion,
    UpstreamError,
)
from .explore import CursorStore, ExpansionRequest, ExplorationEngine
from .graph import CitationNetwork
from .layout import LayoutParams, apply_positions, run_layout
from .ratelimit import SlidingWindowLimiter
from .scholar import ClientConfig, ScholarClient
from .snapshot import Snapshot, StyleConfig, deserialize, quantize, serialize
from .storage import MemoryShareStore, ShareRecord, open_store

log = logging.getLogger(__name__)

DEFAULT_EMBED_WIDTH = 800
DEFAULT_EMBED_HEIGHT = 600


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8100
    storage: str = "memory"  # memory | fs | sqlite
    storage_dir: Path | None = None
    base_url: str | None = None  # external URL prefix for share links
    max_snapshot_bytes: int = 5 * 1024 * 1024
    session_ttl: float = 3600.0
    cors_origins: list[str] = field(default_factory=list)
    publish_capacity: int = 60  # per-IP writes per publish_window
    publish_window: float = 300.0
    ui_dir: Path | None = None
    client: ClientConfig = field(default_factory=ClientConfig)
    layout: LayoutParams = field(default_factory=LayoutParams)


@dataclass
class Session:
    session_id: str
    network: CitationNetwork
    style: StyleConfig
    cursors: CursorStore
    last_touched: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionManager:
    def __init__(self, ttl: float, clock=time.monotonic):
        self.ttl = ttl
        self._clock = clock
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()

    def create(self, snapshot: Snapshot | None = None) -> Session:
        session = Session(
            session_id=secrets.token_urlsafe(9),
            network=snapshot_format.network_from_snapshot(snapshot) if snapshot else CitationNetwork(),
            style=snapshot.style if snapshot else StyleConfig(),
            cursors=CursorStore.from_cursors(snapshot.cursors) if snapshot else CursorStore(),
            last_touched=self._clock(),
        )
        with self._registry_lock:
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is not None and self._clock() - session.last_touched > self.ttl:
                del self._sessions[session_id]
                session = None
        if session is None:
            raise UnknownSession(f"no session {session_id!r} (unknown or expired)")
        session.last_touched = self._clock()
        return session


def render_model(session: Session) -> dict:
    """Everything the UI needs to draw one frame, in one payload."""
    network = session.network
    nodes = []
    for nid in network.node_ids():
        paper = network.papers[nid]
        position = network.positions[nid]
        metric = network.metrics[nid]
        nodes.append(
            {
                "corpus_id": nid,
                "title": paper.title,
                "abstract": paper.abstract,
                "authors": list(paper.authors),
                "year": paper.year,
                "venue": paper.venue,
                "citation_count": paper.citation_count,
                "url": paper.url,
                "x": quantize(position.x),
                "y": quantize(position.y),
                "pinned": position.pinned,
                "in_degree": metric.in_degree,
                "out_degree": metric.out_degree,
                "degree": metric.degree,
                "pagerank": quantize(metric.pagerank),
            }
        )
    snap = snapshot_format.snapshot_from_network(
        network, style=session.style, cursors=session.cursors.to_cursors()
    )
    doc = snapshot_format.to_document(snap)
    return {
        "version": snapshot_format.SNAPSHOT_VERSION,
        "session_id": session.session_id,
        "nodes": nodes,
        "edges": doc["edges"],
        "style": doc["style"],
        "cursors": doc["cursors"],
    }


def session_snapshot(session: Session, name: str = "") -> Snapshot:
    return snapshot_format.snapshot_from_network(
        session.network, style=session.style, cursors=session.cursors.to_cursors(), name=name
    )


ERROR_STATUS = {
    InvalidSnapshot: 400,
    ParseError: 400,
    UnsupportedVersion: 400,
    InvalidPaper: 400,
    MissingEndpoint: 400,
    SelfLoopRejected: 400,
    EmptyNetwork: 400,
    MalformedResponse: 502,
    NotFound: 404,
    UnknownPaper: 404,
    UnknownShareId: 404,
    UnknownSession: 404,
    Busy: 409,
    SnapshotTooLarge: 413,
    RateLimited: 429,
    UpstreamError: 502,
    StorageError: 500,
}


def error_response(exc: CitegraphError) -> JSONResponse:
    status = ERROR_STATUS.get(type(exc), 500)
    detail: dict = {}
    headers = {}
    if isinstance(exc, RateLimited):
        detail["retry_after_seconds"] = round(exc.wait_seconds, 3)
        headers["Retry-After"] = str(max(int(exc.wait_seconds + 0.999), 1))
    if isinstance(exc, InvalidSnapshot):
        detail["path"] = exc.path
    if isinstance(exc, ParseError):
        detail["line"] = exc.line
        detail["column"] = exc.column
    if isinstance(exc, UpstreamError) and exc.retry_after:
        headers["Retry-After"] = str(max(int(exc.retry_after + 0.999), 1))
    return JSONResponse(
        status_code=status,
        content={"code": exc.code, "message": str(exc), "detail": detail},
        headers=headers,
    )


def create_app(
    config: ServiceConfig | None = None,
    client: ScholarClient | None = None,
    store=None,
) -> FastAPI:
    config = config or ServiceConfig()
    client = client or ScholarClient(config.client)
    store = store or (
        MemoryShareStore() if config.storage == "memory" else open_store(config.storage, config.storage_dir)
    )
    engine = ExplorationEngine(client, config.layout)
    sessions = SessionManager(config.session_ttl)
    publish_limiters: dict[str, SlidingWindowLimiter] = {}
    publish_lock = threading.Lock()

    app = FastAPI(title="citegraph", version="0.1.0", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.client = client
    app.state.store = store
    app.state.sessions = sessions

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(CitegraphError)
    async def handle_citegraph_error(request: Request, exc: CitegraphError):
        return error_response(exc)

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_error(request: Request, exc: StarletteHTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": "http_error", "message": str(exc.detail), "detail": {}},
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_request", "message": "request validation failed",
                     "detail": {"errors": exc.errors()}},
        )

    @app.exception_handler(ValueError)
    async def handle_value_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_request", "message": str(exc), "detail": {}},
        )

    def external_base(request: Request) -> str:
        return (config.base_url or str(request.base_url)).rstrip("/")

    # -- shares ---------------------------------------------------------

    @app.post("/api/snapshots", status_code=201)
    async def publish_snapshot(request: Request):
        body = await request.body()
        if len(body) > config.max_snapshot_bytes:
            raise SnapshotTooLarge(
                f"snapshot is {len(body)} bytes; limit is {config.max_snapshot_bytes}"
            )
        ip = request.client.host if request.client else "unknown"
        with publish_lock:
            limiter = publish_limiters.setdefault(
                ip, SlidingWindowLimiter(config.publish_capacity, config.publish_window)
            )
        decision = limiter.acquire_slot(time.monotonic())
        if not decision.granted:
            raise RateLimited("too many publishes from this address", decision.wait_seconds)
        snapshot = deserialize(body)
        canonical = serialize(snapshot).encode("utf-8")
        record = ShareRecord.for_content(canonical)
        store.put(record)
        return JSONResponse(
            status_code=201,
            content={
                "share_id": record.share_id,
                "url": f"{external_base(request)}/s/{record.share_id}",
            },
        )

    def fetch_record(share_id: str) -> ShareRecord:
        record = store.get(share_id)
        if record is None:
            raise UnknownShareId(f"no shared snapshot {share_id!r}")
        return record

    @app.get("/api/snapshots/{share_id}")
    def get_snapshot(share_id: str):
        record = fetch_record(share_id)
        return Response(
            content=record.canonical,
            media_type="application/json",
            headers={
                "ETag": f'"{record.share_id}"',
                "Cache-Control": "public, max-age=31536000, immutable",
            },
        )

    @app.get("/embed/{share_id}", response_class=HTMLResponse)
    def embed_page(share_id: str):
        record = fetch_record(share_id)
        return HTMLResponse(_embed_html(share_id, record, ui_available=_ui_index(config) is not None))

    @app.get("/embed/{share_id}/jupyter", response_class=PlainTextResponse)
    def embed_jupyter(share_id: str, request: Request,
                      width: int = DEFAULT_EMBED_WIDTH, height: int = DEFAULT_EMBED_HEIGHT):
        fetch_record(share_id)
        src = f"{external_base(request)}/embed/{share_id}"
        return PlainTextResponse(
            f'<iframe src="{src}" width="{width}" height="{height}" '
            f'frameborder="0" title="citation network"></iframe>\n'
        )

    # -- sessions ---------------------------------------------------------

    @app.post("/api/sessions", status_code=201)
    async def create_session(request: Request):
        body = await request.body()
        payload = None
        if body.strip():
            import json as _json

            try:
                payload = _json.loads(body)
            except ValueError as exc:
                raise ParseError(f"request body is not JSON: {exc}") from exc
        snapshot = None
        seed_id = None
        if isinstance(payload, dict) and payload:
            if "version" in payload:
                snapshot = snapshot_format.from_document(payload)
            elif "share_id" in payload:
                snapshot = deserialize(fetch_record(str(payload["share_id"])).canonical)
            elif "corpus_id" in payload:
                seed_id = int(payload["corpus_id"])
            else:
                raise ValueError("body must be a snapshot, {share_id}, or {corpus_id}")
        session = sessions.create(snapshot)
        if seed_id is not None:
            with _mutation(session):
                engine.seed(session.network, seed_id, blocking=False)
        return JSONResponse(
            status_code=201,
            content={"session_id": session.session_id, "graph": render_model(session)},
        )

    @app.get("/api/sessions/{session_id}/graph")
    def get_graph(session_id: str):
        session = sessions.get(session_id)
        with session.lock:  # wait out any in-flight mutation, then read
            return render_model(session)

    @app.post("/api/sessions/{session_id}/seed")
    def seed_session(session_id: str, body: dict):
        session = sessions.get(session_id)
        corpus_id = body.get("corpus_id")
        if not isinstance(corpus_id, int) or corpus_id <= 0:
            raise ValueError("corpus_id must be a positive integer")
        with _mutation(session):
            paper = engine.seed(session.network, corpus_id, blocking=False)
            return {"corpus_id": paper.corpus_id, "graph": render_model(session)}

    @app.post("/api/sessions/{session_id}/expand")
    def expand_session(session_id: str, body: dict):
        session = sessions.get(session_id)
        request_obj = ExpansionRequest(
            node=body.get("node", 0),
            direction=body.get("direction", ""),
            batch_size=body.get("batch_size", 5),
            strategy=body.get("strategy", "upstream_order"),
        )
        request_obj.validate()
        with _mutation(session):
            result = engine.expand(session.network, session.cursors, request_obj, blocking=False)
            return {
                "result": {
                    "added_papers": result.added_papers,
                    "added_edges": [{"source": e.source, "target": e.target} for e in result.added_edges],
                    "cursor": result.cursor,
                    "exhausted": result.exhausted,
                },
                "graph": render_model(session),
            }

    @app.patch("/api/sessions/{session_id}/style")
    def patch_style(session_id: str, body: dict):
        session = sessions.get(session_id)
        with _mutation(session):
            current = snapshot_format.to_document(
                snapshot_format.Snapshot(style=session.style)
            )["style"]
            known = set(current)
            ignored = sorted(set(body) - known)
            merged = {**current, **{k: v for k, v in body.items() if k in known}}
            style = snapshot_format.style_from_document(merged)
            session.style = style
            return {"style": snapshot_format.to_document(snapshot_format.Snapshot(style=style))["style"],
                    "ignored": ignored}

    @app.post("/api/sessions/{session_id}/layout")
    def layout_session(session_id: str, body: dict | None = None):
        session = sessions.get(session_id)
        body = body or {}
        overrides = {
            f.name: body[f.name]
            for f in dataclass_fields(LayoutParams)
            if f.name in body
        }
        params = LayoutParams(**{**_layout_defaults(config.layout), **overrides})
        relax_only = body.get("relax_only")
        if relax_only is not None and not isinstance(relax_only, list):
            raise ValueError("relax_only must be a list of corpus ids")
        with _mutation(session):
            positions = run_layout(
                session.network, params,
                relax_only=[int(x) for x in relax_only] if relax_only is not None else None,
            )
            apply_positions(session.network, positions)
            return {"graph": render_model(session)}

    @app.get("/api/health")
    def health():
        return {"status": "ok", "mode": config.client.mode}

    # -- UI shell ---------------------------------------------------------

    ui_index = _ui_index(config)
    if ui_index is not None:
        app.mount("/ui", StaticFiles(directory=str(ui_index.parent)), name="ui")

        @app.get("/", response_class=HTMLResponse, include_in_schema=False)
        @app.get("/s/{share_id}", response_class=HTMLResponse, include_in_schema=False)
        def spa(share_id: str | None = None):
            return FileResponse(str(ui_index))

    else:

        @app.get("/", response_class=HTMLResponse, include_in_schema=False)
        def index():
            return HTMLResponse(
                "<!doctype html><html><body><h1>citegraph service</h1>"
                "<p>API is up. The browser UI is not built; see README.</p></body></html>"
            )

        @app.get("/s/{share_id}", response_class=HTMLResponse, include_in_schema=False)
        def share_page(share_id: str):
            fetch_record(share_id)
            return HTMLResponse(
                "<!doctype html><html><body><h1>shared snapshot</h1>"
                f'<p>Snapshot JSON: <a href="/api/snapshots/{share_id}">{share_id}</a>. '
                "Build the UI to explore it interactively.</p></body></html>"
            )

    return app


class _mutation:
    """Per-session single-writer guard: 409 Busy when already held."""

    def __init__(self, session: Session):
        self.session = session

    def __enter__(self):
        if not self.session.lock.acquire(blocking=False):
            raise Busy(f"session {self.session.session_id} has a mutation in flight")
        return self.session

    def __exit__(self, exc_type, exc, tb):
        self.session.lock.release()
        return False


def _layout_defaults(params: LayoutParams) -> dict:
    return {f.name: getattr(params, f.name) for f in dataclass_fields(LayoutParams)}


def _ui_index(config: ServiceConfig) -> Path | None:
    candidates = []
    if config.ui_dir:
        candidates.append(Path(config.ui_dir))
    candidates.append(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    for candidate in candidates:
        index = candidate / "index.html"
        if index.is_file():
            return index
    return None


def _embed_html(share_id: str, record: ShareRecord, ui_available: bool) -> str:
    boot = (
        "<script>window.CITEGRAPH_BOOT="
        f'{{"mode":"embed","shareId":"{share_id}","snapshotUrl":"/api/snapshots/{share_id}"}};'
        "</script>"
    )
    if ui_available:
        body = '<div id="app"></div><script type="module" src="/ui/main.js"></script>'
    else:
        import json as _json

        doc = _json.loads(record.canonical)
        body = (
            f"<h1>{doc.get('name') or 'shared citation network'}</h1>"
            f"<p>{len(doc.get('nodes', []))} papers, {len(doc.get('edges', []))} citations. "
            f'<a href="/api/snapshots/{share_id}">snapshot JSON</a></p>'
        )
    return (
        "<!doctype html><html><head><meta charset=\"utf-8\">"
        "<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">"
        "<title>citegraph embed</title></head>"
        f"<body>{boot}{body}</body></html>"
    )
