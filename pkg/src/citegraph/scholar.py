"""Client for the Semantic Scholar Graph API.

URL templates (the single place they are defined):

    paper       GET {base}/paper/CorpusId:{id}?fields={PAPER_FIELDS}
    references  GET {base}/paper/CorpusId:{id}/references?fields={LINKED_FIELDS}&offset=&limit=
    citations   GET {base}/paper/CorpusId:{id}/citations?fields={LINKED_FIELDS}&offset=&limit=

Two transports: live HTTPS, and replay from a directory of recorded JSON
responses (one file per response, ``{endpoint}_{corpusid}_{offset}_{limit}.json``
plus a ``manifest.json``). Replay is the default for tests and demos; live
mode is opt-in. A sliding-window limiter (100 requests / 5 minutes, the
upstream per-IP allowance) guards both.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from .errors import MalformedResponse, NotFound, RateLimited, UpstreamError
from .graph import Paper, semantic_scholar_url
from .ratelimit import SlidingWindowLimiter

log = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://api.semanticscholar.org/graph/v1"

PAPER_FIELDS = ",".join(
    [
        "title", "abstract", "authors", "year", "venue", "citationCount",
        "externalIds", "url",
        "references.externalIds", "references.title", "references.year",
        "references.citationCount", "references.url",
        "citations.externalIds", "citations.title", "citations.year",
        "citations.citationCount", "citations.url",
    ]
)
LINKED_FIELDS = "externalIds,title,year,citationCount,url"

MAX_CONSECUTIVE_FAILURES = 3
DEFAULT_RETRY_AFTER = 30.0


@dataclass
class ClientConfig:
    base_url: str = DEFAULT_BASE_URL
    api_key: str | None = None
    mode: str = "live"  # "live" | "replay"
    fixtures_dir: Path | None = None
    limiter_capacity: int = 100
    limiter_window: float = 300.0
    cache_enabled: bool = True
    timeout: float = 20.0

    @classmethod
    def from_env(cls, **overrides) -> "ClientConfig":
        env = os.environ
        values = dict(
            base_url=env.get("CITEGRAPH_API_BASE", DEFAULT_BASE_URL),
            api_key=env.get("CITEGRAPH_API_KEY") or None,
            mode=env.get("CITEGRAPH_MODE", "live"),
            fixtures_dir=Path(env["CITEGRAPH_FIXTURES"]) if env.get("CITEGRAPH_FIXTURES") else None,
            limiter_capacity=int(env.get("CITEGRAPH_LIMITER_CAPACITY", 100)),
            limiter_window=float(env.get("CITEGRAPH_LIMITER_WINDOW", 300.0)),
        )
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True)
class LinkedPaperSummary:
    """Compact view of a referenced or citing paper."""

    corpus_id: int
    title: str
    year: int | None
    citation_count: int
    url: str

    def to_paper(self) -> Paper:
        return Paper(
            corpus_id=self.corpus_id,
            title=self.title,
            year=self.year,
            citation_count=self.citation_count,
            url=self.url,
        )


@dataclass
class LinkedPage:
    summaries: list[LinkedPaperSummary]
    offset: int
    next_offset: int | None  # None means upstream has no more entries


@dataclass
class PaperRecord:
    """Full metadata for one paper plus summaries of its linked papers."""

    corpus_id: int
    title: str
    abstract: str | None
    authors: list[str]
    year: int | None
    venue: str | None
    citation_count: int
    url: str
    references: list[LinkedPaperSummary] = field(default_factory=list)
    citations: list[LinkedPaperSummary] = field(default_factory=list)

    @property
    def reference_ids(self) -> list[int]:
        return [s.corpus_id for s in self.references]

    @property
    def citation_ids(self) -> list[int]:
        return [s.corpus_id for s in self.citations]

    def to_paper(self) -> Paper:
        return Paper(
            corpus_id=self.corpus_id,
            title=self.title,
            abstract=self.abstract,
            authors=list(self.authors),
            year=self.year,
            venue=self.venue,
            citation_count=self.citation_count,
            url=self.url,
        )


class _Upstream429(Exception):
    def __init__(self, retry_after: float):
        self.retry_after = retry_after


class LiveTransport:
    """HTTPS transport against the real Graph API."""

    def __init__(self, config: ClientConfig):
        headers = {"User-Agent": "citegraph/0.1"}
        if config.api_key:
            headers["x-api-key"] = config.api_key
        self._client = httpx.Client(base_url=config.base_url, headers=headers, timeout=config.timeout)

    def get(self, endpoint: str, corpus_id: int, offset: int, limit: int) -> dict:
        if endpoint == "paper":
            url = f"/paper/CorpusId:{corpus_id}"
            params = {"fields": PAPER_FIELDS}
        else:
            url = f"/paper/CorpusId:{corpus_id}/{endpoint}"
            params = {"fields": LINKED_FIELDS, "offset": offset, "limit": limit}
        try:
            response = self._client.get(url, params=params)
        except httpx.HTTPError as exc:
            raise UpstreamError(f"request failed: {exc}") from exc
        if response.status_code == 404:
            raise NotFound(f"CorpusID {corpus_id} not found upstream")
        if response.status_code == 429:
            raise _Upstream429(float(response.headers.get("Retry-After", DEFAULT_RETRY_AFTER)))
        if response.status_code >= 500:
            raise UpstreamError(f"upstream {response.status_code} for {url}")
        if response.status_code != 200:
            raise UpstreamError(f"unexpected status {response.status_code} for {url}")
        try:
            return response.json()
        except ValueError as exc:
            raise MalformedResponse(f"invalid JSON from {url}: {exc}") from exc

    def close(self) -> None:
        self._client.close()


class ReplayTransport:
    """Serves recorded responses from a fixtures directory."""

    def __init__(self, fixtures_dir: Path):
        self.fixtures_dir = Path(fixtures_dir)
        manifest_path = self.fixtures_dir / "manifest.json"
        if not manifest_path.is_file():
            raise FileNotFoundError(f"no manifest.json in {self.fixtures_dir}")
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        self.known_ids = {int(k) for k in manifest.get("papers", {})}
        self.calls = 0

    def get(self, endpoint: str, corpus_id: int, offset: int, limit: int) -> dict:
        self.calls += 1
        if corpus_id not in self.known_ids:
            raise NotFound(f"CorpusID {corpus_id} not in the recorded corpus")
        name = f"{endpoint}_{corpus_id}_{offset}_{limit}.json"
        path = self.fixtures_dir / name
        if not path.is_file():
            # deterministic miss: retrying cannot help
            raise UpstreamError(f"no recording {name} in {self.fixtures_dir}", retryable=False)
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise MalformedResponse(f"recording {name} is not valid JSON: {exc}") from exc

    def close(self) -> None:
        pass


class ScholarClient:
    """Rate-limited, caching client; shareable across threads.

    ``blocking=True`` waits for a limiter slot; ``blocking=False`` raises
    RateLimited with the minimal wait instead.
    """

    def __init__(
        self,
        config: ClientConfig | None = None,
        transport=None,
        clock=time.monotonic,
        sleeper=time.sleep,
    ):
        self.config = config or ClientConfig()
        if transport is not None:
            self.transport = transport
        elif self.config.mode == "replay":
            if self.config.fixtures_dir is None:
                raise ValueError("replay mode requires fixtures_dir")
            self.transport = ReplayTransport(self.config.fixtures_dir)
        else:
            self.transport = LiveTransport(self.config)
        self.limiter = SlidingWindowLimiter(self.config.limiter_capacity, self.config.limiter_window)
        self._clock = clock
        self._sleep = sleeper
        self._cache: dict[tuple, object] = {}
        self._cache_lock = threading.Lock()
        self.request_count = 0

    # -- public API -------------------------------------------------------

    def fetch_paper(self, corpus_id: int, blocking: bool = True) -> PaperRecord:
        """Full record for one paper, including linked-paper summaries."""
        self._check_id(corpus_id)
        key = ("paper", corpus_id, 0, 0)
        cached = self._cache_get(key)
        if cached is not None:
            return cached
        payload = self._request("paper", corpus_id, 0, 0, blocking)
        record = self._parse_paper(payload, corpus_id)
        self._cache_put(key, record)
        return record

    def fetch_references(
        self, corpus_id: int, limit: int = 5, offset: int = 0, blocking: bool = True
    ) -> list[LinkedPaperSummary]:
        """Up to ``limit`` papers that ``corpus_id`` cites, in upstream order."""
        return self.fetch_reference_page(corpus_id, limit, offset, blocking).summaries

    def fetch_citations(
        self, corpus_id: int, limit: int = 5, offset: int = 0, blocking: bool = True
    ) -> list[LinkedPaperSummary]:
        """Up to ``limit`` papers that cite ``corpus_id``, in upstream order."""
        return self.fetch_citation_page(corpus_id, limit, offset, blocking).summaries

    def fetch_reference_page(
        self, corpus_id: int, limit: int = 5, offset: int = 0, blocking: bool = True
    ) -> LinkedPage:
        return self._fetch_page("references", "citedPaper", corpus_id, limit, offset, blocking)

    def fetch_citation_page(
        self, corpus_id: int, limit: int = 5, offset: int = 0, blocking: bool = True
    ) -> LinkedPage:
        return self._fetch_page("citations", "citingPaper", corpus_id, limit, offset, blocking)

    def close(self) -> None:
        self.transport.close()

    # -- internals ----------------------------------------------------------

    @staticmethod
    def _check_id(corpus_id: int, limit: int | None = None, offset: int | None = None) -> None:
        if not isinstance(corpus_id, int) or corpus_id <= 0:
            raise ValueError(f"corpus_id must be a positive integer, got {corpus_id!r}")
        if limit is not None and limit < 1:
            raise ValueError("limit must be >= 1")
        if offset is not None and offset < 0:
            raise ValueError("offset must be >= 0")

    def _fetch_page(self, endpoint, wrapper_key, corpus_id, limit, offset, blocking) -> LinkedPage:
        self._check_id(corpus_id, limit, offset)
        key = (endpoint, corpus_id, limit, offset)
        cached = self._cache_get(key)
        if cached is not None:
            return cached
        payload = self._request(endpoint, corpus_id, offset, limit, blocking)
        page = self._parse_page(payload, wrapper_key, offset)
        self._cache_put(key, page)
        return page

    def _cache_get(self, key):
        if not self.config.cache_enabled:
            return None
        with self._cache_lock:
            return self._cache.get(key)

    def _cache_put(self, key, value) -> None:
        if not self.config.cache_enabled:
            return
        with self._cache_lock:
            self._cache[key] = value

    def _await_slot(self, blocking: bool) -> None:
        while True:
            decision = self.limiter.acquire_slot(self._clock())
            if decision.granted:
                return
            if not blocking:
                raise RateLimited(
                    f"local limiter saturated; retry in {decision.wait_seconds:.1f}s",
                    wait_seconds=decision.wait_seconds,
                )
            self._sleep(decision.wait_seconds)

    def _request(self, endpoint: str, corpus_id: int, offset: int, limit: int, blocking: bool) -> dict:
        failures = 0
        while True:
            self._await_slot(blocking)
            self.request_count += 1
            try:
                return self.transport.get(endpoint, corpus_id, offset, limit)
            except _Upstream429 as exc:
                # Upstream throttled us: honor its hint and tighten locally so
                # other callers back off too.
                self.limiter.tighten(self._clock(), exc.retry_after)
                failures += 1
                log.warning("upstream 429, retry-after %.1fs (failure %d)", exc.retry_after, failures)
                if failures >= MAX_CONSECUTIVE_FAILURES:
                    raise UpstreamError(
                        "upstream rate limiting persisted after retries",
                        retry_after=exc.retry_after,
                    ) from exc
                if not blocking:
                    raise RateLimited(
                        f"upstream throttled; retry in {exc.retry_after:.1f}s",
                        wait_seconds=exc.retry_after,
                    ) from exc
            except UpstreamError as exc:
                if not exc.retryable:
                    raise
                failures += 1
                if failures >= MAX_CONSECUTIVE_FAILURES:
                    raise
                self._sleep(min(2.0**failures, 10.0))

    # -- parsing ----------------------------------------------------------

    def _parse_paper(self, payload: dict, corpus_id: int) -> PaperRecord:
        if not isinstance(payload, dict):
            raise MalformedResponse("paper response is not a JSON object")
        title = payload.get("title")
        if not title or not str(title).strip():
            raise MalformedResponse(f"paper {corpus_id} has no title in the response")
        resolved = self._linked_corpus_id(payload) or corpus_id
        authors = [a.get("name") for a in payload.get("authors") or [] if isinstance(a, dict)]
        return PaperRecord(
            corpus_id=resolved,
            title=str(title),
            abstract=payload.get("abstract"),
            authors=[a for a in authors if a],
            year=payload.get("year"),
            venue=payload.get("venue") or None,
            citation_count=max(int(payload.get("citationCount") or 0), 0),
            url=payload.get("url") or semantic_scholar_url(resolved),
            references=self._dedupe(self._summaries(payload.get("references"))),
            citations=self._dedupe(self._summaries(payload.get("citations"))),
        )

    def _parse_page(self, payload: dict, wrapper_key: str, offset: int) -> LinkedPage:
        if not isinstance(payload, dict) or not isinstance(payload.get("data"), list):
            raise MalformedResponse("linked-paper response has no data array")
        entries = [item.get(wrapper_key) for item in payload["data"] if isinstance(item, dict)]
        summaries = self._dedupe(self._summaries(entries))
        next_offset = payload.get("next")
        return LinkedPage(
            summaries=summaries,
            offset=payload.get("offset", offset),
            next_offset=int(next_offset) if next_offset is not None else None,
        )

    def _summaries(self, entries) -> list[LinkedPaperSummary]:
        out = []
        for entry in entries or []:
            if not isinstance(entry, dict):
                continue
            cid = self._linked_corpus_id(entry)
            if cid is None:
                continue  # upstream sometimes lists unresolvable entries
            title = entry.get("title") or "(untitled)"
            out.append(
                LinkedPaperSummary(
                    corpus_id=cid,
                    title=str(title),
                    year=entry.get("year"),
                    citation_count=max(int(entry.get("citationCount") or 0), 0),
                    url=entry.get("url") or semantic_scholar_url(cid),
                )
            )
        return out

    @staticmethod
    def _linked_corpus_id(entry: dict) -> int | None:
        external = entry.get("externalIds") or {}
        cid = external.get("CorpusId", entry.get("corpusId"))
        try:
            cid = int(cid)
        except (TypeError, ValueError):
            return None
        return cid if cid > 0 else None

    @staticmethod
    def _dedupe(summaries: list[LinkedPaperSummary]) -> list[LinkedPaperSummary]:
        seen: set[int] = set()
        out = []
        for s in summaries:
            if s.corpus_id not in seen:
                seen.add(s.corpus_id)
                out.append(s)
        return out
