"""Incremental exploration: seeding papers and expanding their neighborhoods.

An expansion pulls the next ``batch_size`` linked papers for a node, in one
of three orders, and materializes them as nodes and citing→cited edges.
Papers already present count against the batch but only contribute missing
edges. Per-(node, direction) cursors make repeated expansions page onward
instead of re-adding the same batch; changing strategy resets the cursor
because the ordering redefines the sequence.

All upstream fetching happens before the network is touched, so a failed
expansion leaves the network exactly as it was.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import UnknownPaper
from .graph import CitationEdge, CitationNetwork
from .layout import LayoutParams, place_expansion, place_seed
from .scholar import LinkedPaperSummary, ScholarClient
from .snapshot import DIRECTIONS, ExpansionCursor, StyleConfig

STRATEGIES = ("upstream_order", "citation_count_desc", "recency_desc")

# Sorting strategies pull a window of candidates (10x the default batch) and
# order locally; upstream cannot sort by arbitrary keys. Ordering quality is
# therefore per-window, not global.
CANDIDATE_WINDOW = 50


@dataclass
class ExpansionRequest:
    node: int
    direction: str  # "references" | "citations"
    batch_size: int = 5
    strategy: str = "upstream_order"

    def validate(self) -> None:
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class ExpansionResult:
    added_papers: list[int]
    added_edges: list[CitationEdge]
    cursor: int
    exhausted: bool


@dataclass
class CursorState:
    strategy: str | None = None  # None until the first expand adopts one
    consumed: int = 0
    upstream_offset: int = 0
    pending: list[LinkedPaperSummary] = field(default_factory=list)
    upstream_exhausted: bool = False


class CursorStore:
    """Expansion progress per (node, direction)."""

    def __init__(self):
        self._states: dict[tuple[int, str], CursorState] = {}

    def state(self, node: int, direction: str) -> CursorState:
        return self._states.setdefault((node, direction), CursorState())

    def drop_node(self, node: int) -> None:
        for key in [k for k in self._states if k[0] == node]:
            del self._states[key]

    def to_cursors(self) -> list[ExpansionCursor]:
        # only the consumed count survives serialization; unconsumed window
        # leftovers are re-fetched after a reload
        return [
            ExpansionCursor(corpus_id=node, direction=direction, offset=state.consumed)
            for (node, direction), state in sorted(self._states.items())
            if state.consumed > 0
        ]

    @classmethod
    def from_cursors(cls, cursors: list[ExpansionCursor]) -> "CursorStore":
        # serialized offsets are upstream-order consumed counts, so restored
        # cursors resume as upstream_order; a different strategy afterwards
        # resets the sequence like any other strategy change
        store = cls()
        for cursor in cursors:
            store._states[(cursor.corpus_id, cursor.direction)] = CursorState(
                strategy="upstream_order", consumed=cursor.offset, upstream_offset=cursor.offset
            )
        return store


def toggle_edge_direction_display(config: StyleConfig) -> StyleConfig:
    """Flip arrowhead visibility; graph topology is untouched."""
    return replace(config, show_edge_direction=not config.show_edge_direction)


class ExplorationEngine:
    """Drives seeding and expansion against one scholar client."""

    def __init__(self, client: ScholarClient, layout_params: LayoutParams | None = None):
        self.client = client
        self.layout_params = layout_params or LayoutParams()

    def seed(self, network: CitationNetwork, corpus_id: int, blocking: bool = True):
        """Fetch one paper and add it as a node; no edges are added.

        Client errors propagate and leave the network unchanged.
        """
        record = self.client.fetch_paper(corpus_id, blocking=blocking)
        is_new = record.corpus_id not in network
        network.add_paper(record.to_paper())
        if is_new:
            x, y = place_seed(len(network) - 1, self.layout_params)
            network.set_position(record.corpus_id, x, y)
        return record.to_paper()

    def expand(
        self,
        network: CitationNetwork,
        cursors: CursorStore,
        request: ExpansionRequest,
        blocking: bool = True,
    ) -> ExpansionResult:
        request.validate()
        if request.node not in network:
            raise UnknownPaper(f"cannot expand {request.node}: not in the network")

        state = cursors.state(request.node, request.direction)
        if state.strategy is not None and state.strategy != request.strategy:
            state = CursorState()  # ordering changed: restart the sequence

        # fetch phase: work on copies so a failure changes nothing
        pending = list(state.pending)
        upstream_offset = state.upstream_offset
        upstream_exhausted = state.upstream_exhausted
        window = request.batch_size if request.strategy == "upstream_order" else CANDIDATE_WINDOW
        fetch = (
            self.client.fetch_reference_page
            if request.direction == "references"
            else self.client.fetch_citation_page
        )
        while len(pending) < request.batch_size and not upstream_exhausted:
            page = fetch(request.node, limit=window, offset=upstream_offset, blocking=blocking)
            fresh = [s for s in page.summaries if s.corpus_id != request.node]
            pending.extend(_ordered(fresh, request.strategy))
            if page.next_offset is None:
                upstream_exhausted = True
            else:
                upstream_offset = page.next_offset

        batch = pending[: request.batch_size]
        leftover = pending[request.batch_size :]

        # mutate phase: nothing below can fail
        added_papers: list[int] = []
        added_edges: list[CitationEdge] = []
        for summary in batch:
            if summary.corpus_id not in network:
                network.add_paper(summary.to_paper())
                added_papers.append(summary.corpus_id)
            if request.direction == "references":
                source, target = request.node, summary.corpus_id
            else:
                source, target = summary.corpus_id, request.node
            if not network.has_edge(source, target):
                network.add_edge(source, target)
                added_edges.append(CitationEdge(source, target))

        if added_papers:
            anchor = self._column_anchor(network, request.node, set(added_papers), len(added_papers))
            placed = place_expansion(anchor, len(added_papers), self.layout_params)
            for nid, (x, y) in zip(added_papers, placed):
                network.set_position(nid, x, y)

        committed = cursors.state(request.node, request.direction)
        committed.strategy = request.strategy
        committed.consumed = state.consumed + len(batch)
        committed.upstream_offset = upstream_offset
        committed.pending = leftover
        committed.upstream_exhausted = upstream_exhausted

        return ExpansionResult(
            added_papers=added_papers,
            added_edges=added_edges,
            cursor=committed.consumed,
            exhausted=upstream_exhausted and not leftover,
        )

    def _column_anchor(
        self, network: CitationNetwork, node: int, added: set[int], count: int
    ) -> tuple[float, float]:
        """Center point for the next batch's column beside ``node``.

        The first batch centers on the parent; later batches (either
        direction) continue the same column downward past whatever already
        occupies it, so repeated expansions never stack.
        """
        parent = network.positions[node]
        spacing = self.layout_params.vertical_spacing
        column_x = parent.x + self.layout_params.horizontal_offset
        occupied = [
            pos.y
            for nid, pos in network.positions.items()
            if nid != node and nid not in added and abs(pos.x - column_x) < 1e-6
        ]
        if not occupied:
            return (parent.x, parent.y)
        return (parent.x, max(occupied) + spacing * (count + 1) / 2)


def _ordered(summaries: list[LinkedPaperSummary], strategy: str) -> list[LinkedPaperSummary]:
    if strategy == "citation_count_desc":
        return sorted(summaries, key=lambda s: (-s.citation_count, s.corpus_id))
    if strategy == "recency_desc":
        return sorted(
            summaries,
            key=lambda s: (-(s.year if s.year is not None else -(10**9)), s.corpus_id),
        )
    return list(summaries)
