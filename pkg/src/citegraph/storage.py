"""Share-record stores: published snapshots addressed by content hash.

Tokens are the first 12 urlsafe-base64 characters of the SHA-256 of the
canonical snapshot bytes (72 bits), so identical content always maps to the
same share URL and collisions are negligible. Records are immutable once
written; ``put`` with an existing id is a no-op.

Three backends: in-memory (tests), one-file-per-record filesystem directory
(self-hosting), and an embedded sqlite database (single-file deployment).
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import sqlite3
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import StorageError

SHARE_ID_LENGTH = 12
_SHARE_ALPHABET = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-")


def share_id_for(canonical: bytes) -> str:
    digest = hashlib.sha256(canonical).digest()
    return base64.urlsafe_b64encode(digest).decode("ascii")[:SHARE_ID_LENGTH]


def is_share_id(token: str) -> bool:
    return len(token) == SHARE_ID_LENGTH and all(c in _SHARE_ALPHABET for c in token)


@dataclass
class ShareRecord:
    share_id: str
    canonical: bytes
    created_at: datetime
    size_bytes: int

    @classmethod
    def for_content(cls, canonical: bytes, created_at: datetime | None = None) -> "ShareRecord":
        return cls(
            share_id=share_id_for(canonical),
            canonical=canonical,
            created_at=created_at or datetime.now(timezone.utc),
            size_bytes=len(canonical),
        )


class MemoryShareStore:
    def __init__(self):
        self._records: dict[str, ShareRecord] = {}
        self._lock = threading.Lock()

    def put(self, record: ShareRecord) -> None:
        with self._lock:
            self._records.setdefault(record.share_id, record)

    def get(self, share_id: str) -> ShareRecord | None:
        with self._lock:
            return self._records.get(share_id)

    def close(self) -> None:
        pass


class FilesystemShareStore:
    """One snapshot file plus one metadata file per record."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _paths(self, share_id: str) -> tuple[Path, Path]:
        if not is_share_id(share_id):
            raise StorageError(f"malformed share id {share_id!r}")
        return (
            self.directory / f"{share_id}.snapshot.json",
            self.directory / f"{share_id}.meta.json",
        )

    def put(self, record: ShareRecord) -> None:
        content_path, meta_path = self._paths(record.share_id)
        if content_path.exists():
            return
        meta = json.dumps(
            {
                "share_id": record.share_id,
                "created_at": record.created_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "size_bytes": record.size_bytes,
            }
        ).encode("utf-8")
        try:
            self._write_atomic(meta_path, meta)
            self._write_atomic(content_path, record.canonical)
        except OSError as exc:
            raise StorageError(f"cannot persist share {record.share_id}: {exc}") from exc

    def _write_atomic(self, path: Path, data: bytes) -> None:
        # unique temp per writer + rename: concurrent identical puts both
        # succeed, and readers never observe a partial file
        fd, tmp_name = tempfile.mkstemp(dir=self.directory, prefix=".write-")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp_name, path)
        except OSError:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise

    def get(self, share_id: str) -> ShareRecord | None:
        content_path, meta_path = self._paths(share_id)
        if not content_path.is_file():
            return None
        try:
            canonical = content_path.read_bytes()
            meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.is_file() else {}
        except (OSError, ValueError) as exc:
            raise StorageError(f"cannot read share {share_id}: {exc}") from exc
        created_raw = meta.get("created_at")
        created_at = (
            datetime.fromisoformat(created_raw.replace("Z", "+00:00"))
            if created_raw
            else datetime.now(timezone.utc)
        )
        return ShareRecord(share_id, canonical, created_at, len(canonical))

    def close(self) -> None:
        pass


class SqliteShareStore:
    def __init__(self, path: Path | str):
        self._conn = sqlite3.connect(str(path), check_same_thread=False)
        self._lock = threading.Lock()
        with self._lock:
            self._conn.execute(
                "CREATE TABLE IF NOT EXISTS shares ("
                " share_id TEXT PRIMARY KEY,"
                " canonical BLOB NOT NULL,"
                " created_at TEXT NOT NULL,"
                " size_bytes INTEGER NOT NULL)"
            )
            self._conn.commit()

    def put(self, record: ShareRecord) -> None:
        try:
            with self._lock:
                self._conn.execute(
                    "INSERT OR IGNORE INTO shares VALUES (?, ?, ?, ?)",
                    (
                        record.share_id,
                        record.canonical,
                        record.created_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
                        record.size_bytes,
                    ),
                )
                self._conn.commit()
        except sqlite3.Error as exc:
            raise StorageError(f"cannot persist share {record.share_id}: {exc}") from exc

    def get(self, share_id: str) -> ShareRecord | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT share_id, canonical, created_at, size_bytes FROM shares WHERE share_id = ?",
                (share_id,),
            ).fetchone()
        if row is None:
            return None
        return ShareRecord(
            share_id=row[0],
            canonical=bytes(row[1]),
            created_at=datetime.fromisoformat(row[2].replace("Z", "+00:00")),
            size_bytes=row[3],
        )

    def close(self) -> None:
        self._conn.close()


def open_store(kind: str, directory: Path | None):
    if kind == "memory":
        return MemoryShareStore()
    if directory is None:
        raise StorageError(f"storage kind {kind!r} needs a directory")
    directory = Path(directory)
    if kind == "fs":
        return FilesystemShareStore(directory)
    if kind == "sqlite":
        directory.mkdir(parents=True, exist_ok=True)
        return SqliteShareStore(directory / "shares.db")
    raise StorageError(f"unknown storage kind {kind!r}")
