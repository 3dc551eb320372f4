"""Citation-network data model, mutation primitives, and graph metrics.

The network is a simple directed graph: papers keyed by CorpusID, edges
pointing from the citing paper to the cited one. Metrics (degree, PageRank)
are recomputed eagerly after every mutation; networks are human-curated and
small, so full recomputation stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import (
    EmptyNetwork,
    InvalidPaper,
    MissingEndpoint,
    SelfLoopRejected,
    UnknownPaper,
)

PAGERANK_DAMPING = 0.85
PAGERANK_TOLERANCE = 1e-10
PAGERANK_MAX_ITERATIONS = 100


def semantic_scholar_url(corpus_id: int) -> str:
    """Permanent redirect URL for a paper identified only by CorpusID."""
    return f"https://api.semanticscholar.org/CorpusID:{corpus_id}"


@dataclass
class Paper:
    """One scholarly work, identified by its Semantic Scholar CorpusID."""

    corpus_id: int
    title: str
    abstract: str | None = None
    authors: list[str] = field(default_factory=list)
    year: int | None = None
    venue: str | None = None
    citation_count: int = 0
    url: str = ""

    def __post_init__(self) -> None:
        if not self.url:
            self.url = semantic_scholar_url(self.corpus_id)

    def validate(self) -> None:
        if not isinstance(self.corpus_id, int) or self.corpus_id <= 0:
            raise InvalidPaper(f"corpus_id must be a positive integer, got {self.corpus_id!r}")
        if not self.title or not self.title.strip():
            raise InvalidPaper(f"paper {self.corpus_id} has an empty title")
        if self.citation_count < 0:
            raise InvalidPaper(f"paper {self.corpus_id} has negative citation_count")


@dataclass(frozen=True)
class CitationEdge:
    """Directed edge from the citing paper to the cited paper."""

    source: int
    target: int


@dataclass
class NodeMetrics:
    in_degree: int = 0
    out_degree: int = 0
    degree: int = 0
    pagerank: float = 0.0


@dataclass
class NodePosition:
    x: float = 0.0
    y: float = 0.0
    pinned: bool = False


class CitationNetwork:
    """Mutable directed citation graph with per-node metrics and positions.

    Single-writer: callers must serialize concurrent mutation of one
    instance (the service layer does this per session).
    """

    def __init__(
        self,
        damping: float = PAGERANK_DAMPING,
        tolerance: float = PAGERANK_TOLERANCE,
        max_iterations: int = PAGERANK_MAX_ITERATIONS,
    ):
        self.papers: dict[int, Paper] = {}
        self.edges: set[CitationEdge] = set()
        self.metrics: dict[int, NodeMetrics] = {}
        self.positions: dict[int, NodePosition] = {}
        self.damping = damping
        self.tolerance = tolerance
        self.max_iterations = max_iterations

    # -- queries --------------------------------------------------------

    def __contains__(self, corpus_id: int) -> bool:
        return corpus_id in self.papers

    def __len__(self) -> int:
        return len(self.papers)

    def node_ids(self) -> list[int]:
        return sorted(self.papers)

    def edge_pairs(self) -> set[tuple[int, int]]:
        return {(e.source, e.target) for e in self.edges}

    def has_edge(self, source: int, target: int) -> bool:
        return CitationEdge(source, target) in self.edges

    # -- mutations --------------------------------------------------------

    def add_paper(self, paper: Paper) -> "CitationNetwork":
        """Add ``paper`` as a node, or refresh metadata if already present.

        Existing edges and position are preserved on a metadata refresh.
        """
        paper.validate()
        self.papers[paper.corpus_id] = replace(paper, authors=list(paper.authors))
        if paper.corpus_id not in self.positions:
            self.positions[paper.corpus_id] = NodePosition()
        self._refresh_metrics()
        return self

    def add_edge(self, source: int, target: int) -> "CitationNetwork":
        """Add a citation edge source→target; duplicates are deduplicated."""
        if source == target:
            raise SelfLoopRejected(f"self-citation {source}→{target} rejected")
        for endpoint in (source, target):
            if endpoint not in self.papers:
                raise MissingEndpoint(f"edge endpoint {endpoint} is not in the network")
        self.edges.add(CitationEdge(source, target))
        self._refresh_metrics()
        return self

    def remove_paper(self, corpus_id: int) -> "CitationNetwork":
        """Remove a node and all its incident edges."""
        if corpus_id not in self.papers:
            raise UnknownPaper(f"paper {corpus_id} is not in the network")
        del self.papers[corpus_id]
        del self.positions[corpus_id]
        self.edges = {e for e in self.edges if corpus_id not in (e.source, e.target)}
        self._refresh_metrics()
        return self

    def set_position(self, corpus_id: int, x: float, y: float, pinned: bool | None = None) -> None:
        if corpus_id not in self.papers:
            raise UnknownPaper(f"paper {corpus_id} is not in the network")
        current = self.positions[corpus_id]
        self.positions[corpus_id] = NodePosition(
            x, y, current.pinned if pinned is None else pinned
        )

    def set_pinned(self, corpus_id: int, pinned: bool) -> None:
        if corpus_id not in self.papers:
            raise UnknownPaper(f"paper {corpus_id} is not in the network")
        self.positions[corpus_id].pinned = pinned

    # -- metrics --------------------------------------------------------

    def _refresh_metrics(self) -> None:
        degrees = compute_degrees(self)
        ranks = compute_pagerank(self, self.damping, self.tolerance, self.max_iterations) if self.papers else {}
        self.metrics = {
            nid: NodeMetrics(
                in_degree=din,
                out_degree=dout,
                degree=din + dout,
                pagerank=ranks.get(nid, 0.0),
            )
            for nid, (din, dout) in degrees.items()
        }


def compute_degrees(network: CitationNetwork) -> dict[int, tuple[int, int]]:
    """(in_degree, out_degree) for every node."""
    degrees: dict[int, list[int]] = {nid: [0, 0] for nid in network.papers}
    for edge in network.edges:
        degrees[edge.source][1] += 1
        degrees[edge.target][0] += 1
    return {nid: (din, dout) for nid, (din, dout) in degrees.items()}


def compute_pagerank(
    network: CitationNetwork,
    damping: float = PAGERANK_DAMPING,
    tolerance: float = PAGERANK_TOLERANCE,
    max_iterations: int = PAGERANK_MAX_ITERATIONS,
) -> dict[int, float]:
    """PageRank by power iteration with uniform teleport.

    Dangling nodes (out-degree 0) redistribute their mass uniformly over all
    nodes. Iteration stops when the L1 change drops below ``tolerance`` or
    after ``max_iterations``. The result sums to 1 within 1e-9.
    """
    if not network.papers:
        raise EmptyNetwork("cannot compute pagerank of an empty network")
    if not (0.0 < damping < 1.0):
        raise ValueError(f"damping must be in (0, 1), got {damping}")

    nodes = network.node_ids()
    n = len(nodes)
    out_links: dict[int, list[int]] = {nid: [] for nid in nodes}
    for edge in network.edges:
        out_links[edge.source].append(edge.target)

    rank = {nid: 1.0 / n for nid in nodes}
    teleport = (1.0 - damping) / n
    for _ in range(max_iterations):
        dangling_mass = sum(rank[nid] for nid in nodes if not out_links[nid])
        incoming = {nid: 0.0 for nid in nodes}
        for nid in nodes:
            targets = out_links[nid]
            if targets:
                share = rank[nid] / len(targets)
                for target in targets:
                    incoming[target] += share
        next_rank = {
            nid: teleport + damping * (incoming[nid] + dangling_mass / n) for nid in nodes
        }
        delta = sum(abs(next_rank[nid] - rank[nid]) for nid in nodes)
        rank = next_rank
        if delta < tolerance:
            break
    return rank
