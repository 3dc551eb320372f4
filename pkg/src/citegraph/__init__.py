"""citegraph: incremental citation-network exploration engine and service."""

from .errors import CitegraphError
from .explore import CursorStore, ExpansionRequest, ExpansionResult, ExplorationEngine
from .graph import CitationEdge, CitationNetwork, Paper, compute_degrees, compute_pagerank
from .layout import LayoutParams, place_expansion, run_layout
from .ratelimit import SlidingWindowLimiter
from .scholar import ClientConfig, PaperRecord, ScholarClient
from .snapshot import Snapshot, StyleConfig, apply_style, deserialize, serialize

__version__ = "0.1.0"

__all__ = [
    "CitationEdge",
    "CitationNetwork",
    "CitegraphError",
    "ClientConfig",
    "CursorStore",
    "ExpansionRequest",
    "ExpansionResult",
    "ExplorationEngine",
    "LayoutParams",
    "Paper",
    "PaperRecord",
    "ScholarClient",
    "SlidingWindowLimiter",
    "Snapshot",
    "StyleConfig",
    "apply_style",
    "compute_degrees",
    "compute_pagerank",
    "deserialize",
    "place_expansion",
    "run_layout",
    "serialize",
    "__version__",
]
