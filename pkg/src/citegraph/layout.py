"""Deterministic force-directed layout and expansion placement.

Forces are the classic trio: pairwise repulsion falling off with squared
distance, springs on edges pulling toward a rest length, and a weak gravity
toward the centroid. Per-iteration displacement is capped by a temperature
that decays by ``cooling_factor``, so runs settle instead of oscillating.
Everything is seeded and iterated in sorted node order, so identical inputs
give identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection, Iterable

import numpy as np

from .graph import CitationNetwork

DISTANCE_EPSILON = 1e-6


@dataclass
class LayoutParams:
    repulsion_strength: float = 5000.0
    spring_length: float = 120.0
    spring_strength: float = 0.05
    gravity: float = 0.01
    iterations: int = 300
    cooling_factor: float = 0.98
    seed: int = 42
    vertical_spacing: float = 40.0
    horizontal_offset: float = 100.0

    def __post_init__(self) -> None:
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not (0.0 < self.cooling_factor < 1.0):
            raise ValueError("cooling_factor must be in (0, 1)")
        if self.vertical_spacing <= 0 or self.horizontal_offset <= 0:
            raise ValueError("spacings must be positive")


def place_expansion(
    parent_position: tuple[float, float], count: int, params: LayoutParams
) -> list[tuple[float, float]]:
    """Positions for ``count`` children: one column right of the parent.

    All children share x = parent.x + horizontal_offset; their y values are
    centered on parent.y and spaced by vertical_spacing.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    px, py = parent_position
    x = px + params.horizontal_offset
    return [
        (x, py + (i - (count - 1) / 2) * params.vertical_spacing)
        for i in range(count)
    ]


def place_seed(index: int, params: LayoutParams) -> tuple[float, float]:
    """Deterministic spot for the ``index``-th independently seeded paper.

    Seeds stack downward from the origin, far enough apart that their own
    expansions will not overlap immediately.
    """
    return (0.0, index * 3 * params.vertical_spacing)


def pin(network: CitationNetwork, corpus_id: int, pinned: bool) -> CitationNetwork:
    """Set a node's pinned flag; pinned nodes are fixed points of run_layout."""
    network.set_pinned(corpus_id, pinned)
    return network


def run_layout(
    network: CitationNetwork,
    params: LayoutParams,
    relax_only: Collection[int] | None = None,
) -> dict[int, tuple[float, float]]:
    """Refined positions for every node; pure, does not touch the network.

    ``relax_only`` treats all other nodes as pinned for this pass, which is
    how incremental refinement preserves the existing picture while newly
    added nodes settle.

    Nodes whose stored coordinates exactly coincide with an earlier node
    (freshly added nodes all sit at the origin) start from seeded
    pseudo-random points instead, so the result is still deterministic.
    """
    ids = network.node_ids()
    if not ids:
        return {}

    pos = np.array(
        [(network.positions[nid].x, network.positions[nid].y) for nid in ids],
        dtype=np.float64,
    )
    pinned = np.array([network.positions[nid].pinned for nid in ids], dtype=bool)
    if relax_only is not None:
        relax = set(relax_only)
        pinned |= np.array([nid not in relax for nid in ids], dtype=bool)

    rng = np.random.default_rng(params.seed)
    seen: set[tuple[float, float]] = set()
    for i, nid in enumerate(ids):
        key = (float(pos[i, 0]), float(pos[i, 1]))
        if key in seen and not pinned[i]:
            pos[i] += rng.uniform(-params.spring_length, params.spring_length, size=2)
        seen.add((float(pos[i, 0]), float(pos[i, 1])))

    index = {nid: i for i, nid in enumerate(ids)}
    edge_pairs = sorted(network.edge_pairs())
    src = np.array([index[s] for s, _ in edge_pairs], dtype=np.intp)
    dst = np.array([index[t] for _, t in edge_pairs], dtype=np.intp)

    temperature = params.spring_length
    movable = ~pinned
    for _ in range(params.iterations):
        force = _forces(pos, src, dst, params)
        magnitude = np.sqrt((force**2).sum(axis=1))
        magnitude = np.maximum(magnitude, DISTANCE_EPSILON)
        scale = np.minimum(magnitude, temperature) / magnitude
        pos[movable] += (force * scale[:, None])[movable]
        temperature *= params.cooling_factor

    return {nid: (float(pos[i, 0]), float(pos[i, 1])) for nid, i in index.items()}


def _forces(pos: np.ndarray, src: np.ndarray, dst: np.ndarray, params: LayoutParams) -> np.ndarray:
    n = len(pos)
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=-1))
    dist = np.maximum(dist, DISTANCE_EPSILON)
    np.fill_diagonal(dist, np.inf)
    repulsion = params.repulsion_strength / dist**2
    force = (repulsion[:, :, None] * diff / dist[:, :, None]).sum(axis=1)

    if len(src):
        delta = pos[src] - pos[dst]
        length = np.maximum(np.sqrt((delta**2).sum(axis=1)), DISTANCE_EPSILON)
        pull = params.spring_strength * (length - params.spring_length)
        unit = delta / length[:, None]
        np.add.at(force, src, -pull[:, None] * unit)
        np.add.at(force, dst, pull[:, None] * unit)

    centroid = pos.mean(axis=0)
    force += params.gravity * (centroid - pos)
    return force


def apply_positions(
    network: CitationNetwork, positions: dict[int, tuple[float, float]] | Iterable
) -> None:
    """Write layout output back onto the network, preserving pinned flags."""
    for nid, (x, y) in dict(positions).items():
        network.set_position(nid, x, y)
