"""Document store with optimistic versioning.

Two implementations share one contract: an in-memory store for tests and
simulation, and a file-backed store that appends one JSON line per write to
a per-collection journal (flush + fsync before acknowledging) and compacts
by rewriting to a temp file plus atomic rename.

The collection set is closed. There is deliberately no collection that could
hold chat or screenshot content; analyzed text never reaches this layer.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from pathlib import Path

from safespace.clock import parse_rfc3339, rfc3339
from safespace.errors import NotFound, StorageUnavailable, VersionConflict

COLLECTIONS = ("users", "contacts", "schedules", "alerts", "outbox", "history", "assessments")


class EventKind(Enum):
    ANALYSIS_PERFORMED = "AnalysisPerformed"
    CHECK_IN = "CheckIn"
    LATE_CHECK_IN = "LateCheckIn"
    ALERT_SENT = "AlertSent"
    SOS_TRIGGERED = "SosTriggered"
    QUESTIONNAIRE_SCORED = "QuestionnaireScored"


@dataclass(frozen=True)
class HistoryEvent:
    event_id: str
    user_id: str
    kind: EventKind
    summary: str
    occurred_at: datetime

    def to_doc(self) -> dict:
        return {
            "event_id": self.event_id,
            "user_id": self.user_id,
            "kind": self.kind.value,
            "summary": self.summary,
            "occurred_at": rfc3339(self.occurred_at),
        }

    @staticmethod
    def from_doc(doc: dict) -> "HistoryEvent":
        return HistoryEvent(
            event_id=doc["event_id"],
            user_id=doc["user_id"],
            kind=EventKind(doc["kind"]),
            summary=doc["summary"],
            occurred_at=parse_rfc3339(doc["occurred_at"]),
        )


@dataclass(frozen=True)
class StoreRecord:
    collection: str
    key: str
    document: dict
    version: int


def _check_collection(collection: str) -> str:
    if collection not in COLLECTIONS:
        raise NotFound(f"collection {collection!r} does not exist")
    return collection


def _matches(document: dict, where: dict | None) -> bool:
    return where is None or all(document.get(k) == v for k, v in where.items())


class MemoryStore:
    """In-memory implementation. Same semantics as the file store, no disk."""

    def __init__(self):
        self._data: dict[str, dict[str, tuple[dict, int]]] = {c: {} for c in COLLECTIONS}
        self._last_version: dict[str, dict[str, int]] = {c: {} for c in COLLECTIONS}
        self._locks = {c: threading.Lock() for c in COLLECTIONS}

    def put(self, collection: str, key: str, document: dict, expected_version: int | None = None) -> int:
        _check_collection(collection)
        with self._locks[collection]:
            current = self._data[collection].get(key)
            current_version = current[1] if current else self._last_version[collection].get(key, 0)
            if expected_version is not None and expected_version != (current[1] if current else 0):
                raise VersionConflict(
                    f"{collection}/{key}: expected version {expected_version}, have {current[1] if current else 0}"
                )
            version = current_version + 1
            self._data[collection][key] = (json.loads(json.dumps(document)), version)
            self._last_version[collection][key] = version
            return version

    def get(self, collection: str, key: str) -> dict:
        return self.get_record(collection, key).document

    def get_record(self, collection: str, key: str) -> StoreRecord:
        _check_collection(collection)
        with self._locks[collection]:
            current = self._data[collection].get(key)
        if current is None:
            raise NotFound(f"{collection}/{key}")
        return StoreRecord(collection, key, json.loads(json.dumps(current[0])), current[1])

    def delete(self, collection: str, key: str) -> None:
        _check_collection(collection)
        with self._locks[collection]:
            if key not in self._data[collection]:
                raise NotFound(f"{collection}/{key}")
            _, version = self._data[collection].pop(key)
            self._last_version[collection][key] = version + 1

    def list(self, collection: str, where: dict | None = None) -> list[dict]:
        _check_collection(collection)
        with self._locks[collection]:
            docs = [doc for doc, _ in self._data[collection].values()]
        return [json.loads(json.dumps(d)) for d in docs if _matches(d, where)]

    def append_history(self, event: HistoryEvent) -> None:
        self.put("history", event.event_id, event.to_doc())

    def compact(self, collection: str) -> None:
        _check_collection(collection)


class FileStore:
    """File-backed journal store.

    Layout: {data_dir}/{collection}.jsonl, one record per line:
    {"k": key, "v": version, "d": document} with "x": true marking deletes.
    A torn final line (crash mid-append) is ignored on load; every
    acknowledged write was flushed and fsynced first.
    """

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageUnavailable(f"cannot create data dir {data_dir}: {exc}") from exc
        self._locks = {c: threading.Lock() for c in COLLECTIONS}
        self._data: dict[str, dict[str, tuple[dict, int]]] = {c: {} for c in COLLECTIONS}
        self._last_version: dict[str, dict[str, int]] = {c: {} for c in COLLECTIONS}
        self._handles: dict[str, object] = {}
        for collection in COLLECTIONS:
            self._load(collection)

    def _path(self, collection: str) -> Path:
        return self.data_dir / f"{collection}.jsonl"

    def _load(self, collection: str) -> None:
        path = self._path(collection)
        if not path.exists():
            return
        try:
            raw = path.read_bytes()
        except OSError as exc:
            raise StorageUnavailable(f"cannot read {path}: {exc}") from exc
        for line in raw.split(b"\n"):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                continue  # torn tail from a crash mid-append
            key, version = record["k"], record["v"]
            if record.get("x"):
                self._data[collection].pop(key, None)
            else:
                self._data[collection][key] = (record["d"], version)
            self._last_version[collection][key] = version

    def _append(self, collection: str, record: dict) -> None:
        try:
            handle = self._handles.get(collection)
            if handle is None:
                handle = open(self._path(collection), "ab")
                self._handles[collection] = handle
            handle.write(json.dumps(record, separators=(",", ":"), sort_keys=True).encode("utf-8") + b"\n")
            handle.flush()
            os.fsync(handle.fileno())
        except OSError as exc:
            raise StorageUnavailable(f"write to {collection} failed: {exc}") from exc

    def put(self, collection: str, key: str, document: dict, expected_version: int | None = None) -> int:
        _check_collection(collection)
        with self._locks[collection]:
            current = self._data[collection].get(key)
            if expected_version is not None and expected_version != (current[1] if current else 0):
                raise VersionConflict(
                    f"{collection}/{key}: expected version {expected_version}, have {current[1] if current else 0}"
                )
            version = self._last_version[collection].get(key, 0) + 1
            self._append(collection, {"k": key, "v": version, "d": document})
            self._data[collection][key] = (json.loads(json.dumps(document)), version)
            self._last_version[collection][key] = version
            return version

    def get(self, collection: str, key: str) -> dict:
        return self.get_record(collection, key).document

    def get_record(self, collection: str, key: str) -> StoreRecord:
        _check_collection(collection)
        with self._locks[collection]:
            current = self._data[collection].get(key)
        if current is None:
            raise NotFound(f"{collection}/{key}")
        return StoreRecord(collection, key, json.loads(json.dumps(current[0])), current[1])

    def delete(self, collection: str, key: str) -> None:
        _check_collection(collection)
        with self._locks[collection]:
            if key not in self._data[collection]:
                raise NotFound(f"{collection}/{key}")
            version = self._last_version[collection].get(key, 0) + 1
            self._append(collection, {"k": key, "v": version, "x": True})
            self._data[collection].pop(key)
            self._last_version[collection][key] = version

    def list(self, collection: str, where: dict | None = None) -> list[dict]:
        _check_collection(collection)
        with self._locks[collection]:
            docs = [doc for doc, _ in self._data[collection].values()]
        return [json.loads(json.dumps(d)) for d in docs if _matches(d, where)]

    def append_history(self, event: HistoryEvent) -> None:
        self.put("history", event.event_id, event.to_doc())

    def compact(self, collection: str) -> None:
        """Rewrite the journal with only live records (atomic rename)."""
        _check_collection(collection)
        with self._locks[collection]:
            handle = self._handles.pop(collection, None)
            if handle is not None:
                handle.close()  # type: ignore[union-attr]
            tmp = self._path(collection).with_suffix(".jsonl.tmp")
            try:
                with open(tmp, "wb") as out:
                    for key, (doc, version) in self._data[collection].items():
                        out.write(
                            json.dumps({"k": key, "v": version, "d": doc}, separators=(",", ":"), sort_keys=True).encode("utf-8")
                            + b"\n"
                        )
                    out.flush()
                    os.fsync(out.fileno())
                os.replace(tmp, self._path(collection))
            except OSError as exc:
                raise StorageUnavailable(f"compaction of {collection} failed: {exc}") from exc

    def close(self) -> None:
        for handle in self._handles.values():
            handle.close()  # type: ignore[union-attr]
        self._handles.clear()
