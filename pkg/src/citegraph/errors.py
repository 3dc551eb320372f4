"""Exception types shared across the package.

Every error the engine or service can surface to a caller lives here so the
HTTP layer can map them to status codes in one place.
"""

from __future__ import annotations


class CitegraphError(Exception):
    """Base class for all citegraph errors."""

    code = "internal_error"


# -- graph ------------------------------------------------------------------

class InvalidPaper(CitegraphError):
    code = "invalid_paper"


class MissingEndpoint(CitegraphError):
    code = "missing_endpoint"


class SelfLoopRejected(CitegraphError):
    code = "self_loop_rejected"


class UnknownPaper(CitegraphError):
    code = "unknown_paper"


class EmptyNetwork(CitegraphError):
    code = "empty_network"


# -- upstream client --------------------------------------------------------

class NotFound(CitegraphError):
    code = "not_found"


class RateLimited(CitegraphError):
    """Local limiter (or upstream 429) refused the request."""

    code = "rate_limited"

    def __init__(self, message: str, wait_seconds: float = 0.0):
        super().__init__(message)
        self.wait_seconds = wait_seconds


class UpstreamError(CitegraphError):
    code = "upstream_error"

    def __init__(self, message: str, retry_after: float | None = None, retryable: bool = True):
        super().__init__(message)
        self.retry_after = retry_after
        self.retryable = retryable


class MalformedResponse(CitegraphError):
    code = "malformed_response"


# -- snapshots --------------------------------------------------------------

class InvalidSnapshot(CitegraphError):
    """Snapshot invariant violation; ``path`` points at the offending element."""

    code = "invalid_snapshot"

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path

    @property
    def detail(self) -> str:
        return str(self)


class ParseError(CitegraphError):
    code = "parse_error"

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.line = line
        self.column = column


class UnsupportedVersion(CitegraphError):
    code = "unsupported_version"


# -- service ----------------------------------------------------------------

class UnknownShareId(CitegraphError):
    code = "unknown_share_id"


class UnknownSession(CitegraphError):
    code = "unknown_session"


class Busy(CitegraphError):
    """Another mutation is in flight for the same session."""

    code = "busy"


class SnapshotTooLarge(CitegraphError):
    code = "too_large"


class StorageError(CitegraphError):
    code = "storage_error"
