"""Injectable time source.

Timer logic never reads the wall clock directly; it asks a Clock. Production
code uses SystemClock, tests and the simulator use SimulatedClock, which only
advances under explicit control so deadline behaviour is deterministic and
sleep-free.
"""

from __future__ import annotations

import threading
from datetime import datetime, timedelta, timezone
from typing import Protocol


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


def rfc3339(ts: datetime) -> str:
    """Serialize a UTC datetime as an RFC 3339 string."""
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def parse_rfc3339(value: str) -> datetime:
    return datetime.fromisoformat(value.replace("Z", "+00:00")).astimezone(timezone.utc)


class Clock(Protocol):
    def now(self) -> datetime: ...


class SystemClock:
    def now(self) -> datetime:
        return utcnow()


class SimulatedClock:
    """Clock that moves only when told to. Thread-safe, monotonic."""

    def __init__(self, start: datetime | None = None):
        self._now = start or datetime(2025, 1, 1, tzinfo=timezone.utc)
        self._lock = threading.Lock()

    def now(self) -> datetime:
        with self._lock:
            return self._now

    def advance(self, seconds: float) -> datetime:
        if seconds < 0:
            raise ValueError("simulated clock cannot move backwards")
        with self._lock:
            self._now += timedelta(seconds=seconds)
            return self._now

    def set(self, ts: datetime) -> None:
        with self._lock:
            if ts < self._now:
                raise ValueError("simulated clock cannot move backwards")
            self._now = ts
