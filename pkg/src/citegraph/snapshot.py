"""Versioned snapshot document: papers, connections, and customizations.

Serialization is canonical so byte equality means semantic equality: object
keys sorted, nodes sorted by corpus_id, edges by (source, target), cursors by
(corpus_id, direction), all coordinates and style numbers quantized to six
decimal places, timestamps at whole-second UTC. Documents carry an integer
``version``; unknown fields are ignored on load and reported as warnings so
old builds can read files written by newer ones.
"""

from __future__ import annotations

import json
import math
import re
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import InvalidSnapshot, ParseError, UnsupportedVersion
from .graph import CitationEdge, CitationNetwork, Paper

SNAPSHOT_VERSION = 1
FILE_EXTENSION = ".citegraph.json"

STYLE_ATTRIBUTES = ("citation_count", "degree", "in_degree", "pagerank", "year")
DIRECTIONS = ("references", "citations")
_HEX_COLOR = re.compile(r"^#[0-9a-f]{6}$")


class DegenerateDomainWarning(UserWarning):
    """A style domain with min == max; values map to the range midpoint."""


def quantize(value: float) -> float:
    """Round to 6 decimals, collapsing -0.0 so canonical bytes are stable."""
    q = round(float(value), 6)
    return 0.0 if q == 0 else q


# -- style ------------------------------------------------------------------

@dataclass
class StyleConfig:
    node_color_attribute: str = "citation_count"
    node_color_domain: tuple[float, float] = (0.0, 1000.0)
    node_color_range: tuple[str, str] = ("#c6dbef", "#08306b")
    node_size_attribute: str = "citation_count"
    node_size_domain: tuple[float, float] = (0.0, 1000.0)
    node_size_range: tuple[float, float] = (3.0, 15.0)
    show_labels: bool = True
    label_max_chars: int = 40
    show_edge_direction: bool = True

    def __post_init__(self) -> None:
        self.node_color_domain = (quantize(self.node_color_domain[0]), quantize(self.node_color_domain[1]))
        self.node_size_domain = (quantize(self.node_size_domain[0]), quantize(self.node_size_domain[1]))
        self.node_size_range = (quantize(self.node_size_range[0]), quantize(self.node_size_range[1]))
        self.node_color_range = (self.node_color_range[0].lower(), self.node_color_range[1].lower())

    def validate(self, path: str = "style") -> None:
        for attr_field in ("node_color_attribute", "node_size_attribute"):
            if getattr(self, attr_field) not in STYLE_ATTRIBUTES:
                raise InvalidSnapshot(
                    f"unknown attribute {getattr(self, attr_field)!r}", f"{path}.{attr_field}"
                )
        for dom_field in ("node_color_domain", "node_size_domain"):
            lo, hi = getattr(self, dom_field)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise InvalidSnapshot("domain must be finite", f"{path}.{dom_field}")
            if lo > hi:
                raise InvalidSnapshot(f"domain min {lo} > max {hi}", f"{path}.{dom_field}")
        for i, color in enumerate(self.node_color_range):
            if not _HEX_COLOR.match(color):
                raise InvalidSnapshot(f"{color!r} is not #rrggbb", f"{path}.node_color_range[{i}]")
        lo, hi = self.node_size_range
        if not (0 < lo <= hi):
            raise InvalidSnapshot(f"size range [{lo}, {hi}] must satisfy 0 < min <= max", f"{path}.node_size_range")
        if not isinstance(self.label_max_chars, int) or self.label_max_chars < 1:
            raise InvalidSnapshot("label_max_chars must be a positive integer", f"{path}.label_max_chars")
        for flag in ("show_labels", "show_edge_direction"):
            if not isinstance(getattr(self, flag), bool):
                raise InvalidSnapshot("expected a boolean", f"{path}.{flag}")


def apply_style(value: float, domain: tuple[float, float], value_range: tuple[float, float]) -> float:
    """Linear map of the clamped value from ``domain`` onto ``value_range``."""
    lo_d, hi_d = float(domain[0]), float(domain[1])
    lo_r, hi_r = float(value_range[0]), float(value_range[1])
    if lo_d > hi_d:
        raise ValueError(f"domain min {lo_d} exceeds max {hi_d}")
    if lo_d == hi_d:
        warnings.warn(
            f"degenerate style domain [{lo_d}, {hi_d}]; using range midpoint",
            DegenerateDomainWarning,
            stacklevel=2,
        )
        return (lo_r + hi_r) / 2
    clamped = min(max(float(value), lo_d), hi_d)
    return lo_r + (clamped - lo_d) / (hi_d - lo_d) * (hi_r - lo_r)


def apply_style_color(value: float, domain: tuple[float, float], color_range: tuple[str, str]) -> str:
    """Per-channel RGB interpolation with the same clamped linear map."""
    lo = _parse_hex(color_range[0])
    hi = _parse_hex(color_range[1])
    channels = [round(apply_style(value, domain, (lo[i], hi[i]))) for i in range(3)]
    return "#" + "".join(f"{min(max(c, 0), 255):02x}" for c in channels)


def _parse_hex(color: str) -> tuple[int, int, int]:
    if not _HEX_COLOR.match(color.lower()):
        raise ValueError(f"{color!r} is not a #rrggbb color")
    raw = color.lstrip("#")
    return int(raw[0:2], 16), int(raw[2:4], 16), int(raw[4:6], 16)


# -- snapshot ----------------------------------------------------------------

@dataclass
class SnapshotNode:
    paper: Paper
    x: float = 0.0
    y: float = 0.0
    pinned: bool = False

    def __post_init__(self) -> None:
        if math.isfinite(self.x):
            self.x = quantize(self.x)
        if math.isfinite(self.y):
            self.y = quantize(self.y)


@dataclass
class ExpansionCursor:
    corpus_id: int
    direction: str
    offset: int


@dataclass
class Snapshot:
    """Everything needed to resume or share an exploration."""

    name: str = ""
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    nodes: list[SnapshotNode] = field(default_factory=list)
    edges: list[CitationEdge] = field(default_factory=list)
    style: StyleConfig = field(default_factory=StyleConfig)
    cursors: list[ExpansionCursor] = field(default_factory=list)
    version: int = SNAPSHOT_VERSION
    load_warnings: list[str] = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self) -> None:
        # normalize to canonical order and precision at construction, so
        # equal contents compare equal and serialize identically
        if self.created_at.tzinfo is None:
            self.created_at = self.created_at.replace(tzinfo=timezone.utc)
        self.created_at = self.created_at.astimezone(timezone.utc).replace(microsecond=0)
        self.nodes.sort(key=lambda n: n.paper.corpus_id)
        self.edges.sort(key=lambda e: (e.source, e.target))
        self.cursors.sort(key=lambda c: (c.corpus_id, c.direction))

    def node_ids(self) -> list[int]:
        return [n.paper.corpus_id for n in self.nodes]

    def validate(self) -> None:
        if self.version != SNAPSHOT_VERSION:
            raise UnsupportedVersion(f"snapshot version {self.version} is not supported")
        if not isinstance(self.name, str):
            raise InvalidSnapshot("name must be text", "name")
        seen_ids: set[int] = set()
        for i, node in enumerate(self.nodes):
            path = f"nodes[{i}]"
            p = node.paper
            if not isinstance(p.corpus_id, int) or isinstance(p.corpus_id, bool) or p.corpus_id <= 0:
                raise InvalidSnapshot(f"corpus_id {p.corpus_id!r} must be a positive integer", f"{path}.corpus_id")
            if p.corpus_id in seen_ids:
                raise InvalidSnapshot(f"duplicate corpus_id {p.corpus_id}", f"{path}.corpus_id")
            seen_ids.add(p.corpus_id)
            if not p.title or not p.title.strip():
                raise InvalidSnapshot("title must be non-empty", f"{path}.title")
            if p.citation_count < 0:
                raise InvalidSnapshot("citation_count must be >= 0", f"{path}.citation_count")
            if not all(isinstance(a, str) for a in p.authors):
                raise InvalidSnapshot("authors must be text names", f"{path}.authors")
            for coord_name, coord in (("x", node.x), ("y", node.y)):
                if not isinstance(coord, (int, float)) or not math.isfinite(coord):
                    raise InvalidSnapshot(f"{coord_name} must be finite", f"{path}.{coord_name}")
            if not isinstance(node.pinned, bool):
                raise InvalidSnapshot("pinned must be a boolean", f"{path}.pinned")
        seen_edges: set[tuple[int, int]] = set()
        for i, edge in enumerate(self.edges):
            path = f"edges[{i}]"
            for end_name, end in (("source", edge.source), ("target", edge.target)):
                if end not in seen_ids:
                    raise InvalidSnapshot(f"{end_name} {end} is not a listed node", f"{path}.{end_name}")
            if edge.source == edge.target:
                raise InvalidSnapshot(f"self-loop on {edge.source}", path)
            pair = (edge.source, edge.target)
            if pair in seen_edges:
                raise InvalidSnapshot(f"duplicate edge {pair}", path)
            seen_edges.add(pair)
        self.style.validate()
        seen_cursors: set[tuple[int, str]] = set()
        for i, cursor in enumerate(self.cursors):
            path = f"cursors[{i}]"
            if cursor.corpus_id not in seen_ids:
                raise InvalidSnapshot(f"cursor for unknown node {cursor.corpus_id}", f"{path}.corpus_id")
            if cursor.direction not in DIRECTIONS:
                raise InvalidSnapshot(f"direction {cursor.direction!r} unknown", f"{path}.direction")
            if not isinstance(cursor.offset, int) or cursor.offset < 0:
                raise InvalidSnapshot("offset must be a non-negative integer", f"{path}.offset")
            key = (cursor.corpus_id, cursor.direction)
            if key in seen_cursors:
                raise InvalidSnapshot(f"duplicate cursor {key}", path)
            seen_cursors.add(key)


# -- serialization -----------------------------------------------------------

def serialize(snapshot: Snapshot) -> str:
    """Canonical UTF-8 JSON text; identical snapshots give identical bytes."""
    snapshot.validate()
    return json.dumps(to_document(snapshot), sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def to_document(snapshot: Snapshot) -> dict:
    return {
        "version": snapshot.version,
        "name": snapshot.name,
        "created_at": snapshot.created_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
        "nodes": [
            {
                "corpus_id": n.paper.corpus_id,
                "title": n.paper.title,
                "abstract": n.paper.abstract,
                "authors": list(n.paper.authors),
                "year": n.paper.year,
                "venue": n.paper.venue,
                "citation_count": n.paper.citation_count,
                "url": n.paper.url,
                "x": quantize(n.x),
                "y": quantize(n.y),
                "pinned": n.pinned,
            }
            for n in snapshot.nodes
        ],
        "edges": [{"source": e.source, "target": e.target} for e in snapshot.edges],
        "style": {
            "node_color_attribute": snapshot.style.node_color_attribute,
            "node_color_domain": list(snapshot.style.node_color_domain),
            "node_color_range": list(snapshot.style.node_color_range),
            "node_size_attribute": snapshot.style.node_size_attribute,
            "node_size_domain": list(snapshot.style.node_size_domain),
            "node_size_range": list(snapshot.style.node_size_range),
            "show_labels": snapshot.style.show_labels,
            "label_max_chars": snapshot.style.label_max_chars,
            "show_edge_direction": snapshot.style.show_edge_direction,
        },
        "cursors": [
            {"corpus_id": c.corpus_id, "direction": c.direction, "offset": c.offset}
            for c in snapshot.cursors
        ],
    }


def deserialize(text: str | bytes) -> Snapshot:
    """Parse and validate a snapshot document.

    Unknown fields are ignored; their paths are collected on the returned
    snapshot's ``load_warnings``.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not UTF-8: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                         line=exc.lineno, column=exc.colno) from exc
    return from_document(document)


def from_document(document) -> Snapshot:
    if not isinstance(document, dict):
        raise InvalidSnapshot("document must be a JSON object", "$")
    version = document.get("version")
    if not isinstance(version, int) or isinstance(version, bool):
        raise InvalidSnapshot("version must be an integer", "version")
    if version != SNAPSHOT_VERSION:
        raise UnsupportedVersion(f"snapshot version {version} is not supported (expected {SNAPSHOT_VERSION})")

    warnings_list: list[str] = []
    known_top = {"version", "name", "created_at", "nodes", "edges", "style", "cursors"}
    warnings_list += [f"ignored unknown field {k!r}" for k in sorted(set(document) - known_top)]

    created_raw = document.get("created_at")
    created_at = _parse_timestamp(created_raw) if created_raw is not None else datetime.now(timezone.utc)

    nodes_raw = _expect_list(document.get("nodes", []), "nodes")
    nodes = [_node_from_doc(item, i, warnings_list) for i, item in enumerate(nodes_raw)]

    edges_raw = _expect_list(document.get("edges", []), "edges")
    edges = []
    for i, item in enumerate(edges_raw):
        if not isinstance(item, dict):
            raise InvalidSnapshot("edge must be an object", f"edges[{i}]")
        edges.append(
            CitationEdge(
                _expect_int(item.get("source"), f"edges[{i}].source"),
                _expect_int(item.get("target"), f"edges[{i}].target"),
            )
        )

    style = _style_from_doc(document.get("style", {}), warnings_list)

    cursors_raw = _expect_list(document.get("cursors", []), "cursors")
    cursors = []
    for i, item in enumerate(cursors_raw):
        if not isinstance(item, dict):
            raise InvalidSnapshot("cursor must be an object", f"cursors[{i}]")
        cursors.append(
            ExpansionCursor(
                corpus_id=_expect_int(item.get("corpus_id"), f"cursors[{i}].corpus_id"),
                direction=str(item.get("direction", "")),
                offset=_expect_int(item.get("offset"), f"cursors[{i}].offset"),
            )
        )

    snapshot = Snapshot(
        name=document.get("name") if isinstance(document.get("name"), str) else "",
        created_at=created_at,
        nodes=nodes,
        edges=edges,
        style=style,
        cursors=cursors,
        version=version,
        load_warnings=warnings_list,
    )
    snapshot.validate()
    return snapshot


_NODE_FIELDS = {
    "corpus_id", "title", "abstract", "authors", "year", "venue",
    "citation_count", "url", "x", "y", "pinned",
}
_STYLE_FIELDS = {
    "node_color_attribute", "node_color_domain", "node_color_range",
    "node_size_attribute", "node_size_domain", "node_size_range",
    "show_labels", "label_max_chars", "show_edge_direction",
}


def _node_from_doc(item, i: int, warnings_list: list[str]) -> SnapshotNode:
    path = f"nodes[{i}]"
    if not isinstance(item, dict):
        raise InvalidSnapshot("node must be an object", path)
    warnings_list += [f"ignored unknown field {path}.{k}" for k in sorted(set(item) - _NODE_FIELDS)]
    corpus_id = _expect_int(item.get("corpus_id"), f"{path}.corpus_id")
    title = item.get("title")
    if not isinstance(title, str) or not title.strip():
        raise InvalidSnapshot("title must be non-empty text", f"{path}.title")
    authors = item.get("authors", [])
    if not isinstance(authors, list) or not all(isinstance(a, str) for a in authors):
        raise InvalidSnapshot("authors must be a list of names", f"{path}.authors")
    year = item.get("year")
    if year is not None:
        year = _expect_int(year, f"{path}.year")
    paper = Paper(
        corpus_id=corpus_id,
        title=title,
        abstract=item.get("abstract") if isinstance(item.get("abstract"), str) else None,
        authors=authors,
        year=year,
        venue=item.get("venue") if isinstance(item.get("venue"), str) else None,
        citation_count=_expect_int(item.get("citation_count", 0), f"{path}.citation_count"),
        url=str(item.get("url") or ""),
    )
    pinned = item.get("pinned", False)
    if not isinstance(pinned, bool):
        raise InvalidSnapshot("pinned must be a boolean", f"{path}.pinned")
    return SnapshotNode(
        paper=paper,
        x=_expect_number(item.get("x", 0.0), f"{path}.x"),
        y=_expect_number(item.get("y", 0.0), f"{path}.y"),
        pinned=pinned,
    )


def style_from_document(item: dict) -> StyleConfig:
    """Parse and validate a style object (e.g. a PATCH body merged over defaults)."""
    style = _style_from_doc(item, [])
    style.validate()
    return style


def _style_from_doc(item, warnings_list: list[str]) -> StyleConfig:
    if not isinstance(item, dict):
        raise InvalidSnapshot("style must be an object", "style")
    warnings_list += [f"ignored unknown field style.{k}" for k in sorted(set(item) - _STYLE_FIELDS)]
    defaults = StyleConfig()

    def pick(key, fallback):
        return item[key] if key in item else fallback

    def pair(key, fallback, caster, path):
        raw = pick(key, fallback)
        if not isinstance(raw, (list, tuple)) or len(raw) != 2:
            raise InvalidSnapshot("expected a [min, max] pair", path)
        return caster(raw[0], f"{path}[0]"), caster(raw[1], f"{path}[1]")

    def color(value, path):
        if not isinstance(value, str):
            raise InvalidSnapshot("expected a #rrggbb string", path)
        return value

    try:
        return StyleConfig(
            node_color_attribute=str(pick("node_color_attribute", defaults.node_color_attribute)),
            node_color_domain=pair("node_color_domain", defaults.node_color_domain, _expect_number, "style.node_color_domain"),
            node_color_range=pair("node_color_range", defaults.node_color_range, color, "style.node_color_range"),
            node_size_attribute=str(pick("node_size_attribute", defaults.node_size_attribute)),
            node_size_domain=pair("node_size_domain", defaults.node_size_domain, _expect_number, "style.node_size_domain"),
            node_size_range=pair("node_size_range", defaults.node_size_range, _expect_number, "style.node_size_range"),
            show_labels=pick("show_labels", defaults.show_labels),
            label_max_chars=pick("label_max_chars", defaults.label_max_chars),
            show_edge_direction=pick("show_edge_direction", defaults.show_edge_direction),
        )
    except AttributeError as exc:
        raise InvalidSnapshot(f"malformed style: {exc}", "style") from exc


def _expect_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise InvalidSnapshot("expected an array", path)
    return value


def _expect_int(value, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidSnapshot(f"expected an integer, got {value!r}", path)
    return value


def _expect_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidSnapshot(f"expected a number, got {value!r}", path)
    if not math.isfinite(value):
        raise InvalidSnapshot("number must be finite", path)
    return float(value)


def _parse_timestamp(raw) -> datetime:
    if not isinstance(raw, str):
        raise InvalidSnapshot("created_at must be an ISO-8601 string", "created_at")
    try:
        return datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError as exc:
        raise InvalidSnapshot(f"created_at is not ISO-8601: {raw!r}", "created_at") from exc


# -- bridges to the live network ----------------------------------------------

def snapshot_from_network(
    network: CitationNetwork,
    style: StyleConfig | None = None,
    cursors: list[ExpansionCursor] | None = None,
    name: str = "",
    created_at: datetime | None = None,
) -> Snapshot:
    node_ids = set(network.papers)
    return Snapshot(
        name=name,
        created_at=created_at or datetime.now(timezone.utc),
        nodes=[
            SnapshotNode(
                paper=network.papers[nid],
                x=network.positions[nid].x,
                y=network.positions[nid].y,
                pinned=network.positions[nid].pinned,
            )
            for nid in network.node_ids()
        ],
        edges=sorted(network.edges, key=lambda e: (e.source, e.target)),
        style=style or StyleConfig(),
        cursors=[c for c in (cursors or []) if c.corpus_id in node_ids],
    )


def network_from_snapshot(snapshot: Snapshot) -> CitationNetwork:
    network = CitationNetwork()
    for node in snapshot.nodes:
        network.add_paper(node.paper)
        network.set_position(node.paper.corpus_id, node.x, node.y, pinned=node.pinned)
    for edge in snapshot.edges:
        network.add_edge(edge.source, edge.target)
    return network
