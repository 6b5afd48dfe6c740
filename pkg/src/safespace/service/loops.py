"""Background scheduler and dispatcher loops.

Each loop runs one tick function every tick_seconds in a daemon thread and
stamps its last completed tick into HealthState; /healthz degrades when the
scheduler has missed more than three ticks.
"""

from __future__ import annotations

import logging
import threading
import time
from typing import Callable

logger = logging.getLogger(__name__)


class HealthState:
    def __init__(self, tick_seconds: float, time_fn: Callable[[], float] = time.monotonic):
        self.tick_seconds = tick_seconds
        self._time_fn = time_fn
        self._started_at = time_fn()
        self._last_scheduler_tick: float | None = None
        self._lock = threading.Lock()

    def record_scheduler_tick(self) -> None:
        with self._lock:
            self._last_scheduler_tick = self._time_fn()

    def scheduler_tick_age_s(self) -> float:
        with self._lock:
            reference = self._last_scheduler_tick if self._last_scheduler_tick is not None else self._started_at
        return max(0.0, self._time_fn() - reference)

    def status(self) -> str:
        return "degraded" if self.scheduler_tick_age_s() > 3 * self.tick_seconds else "ok"


class _Loop(threading.Thread):
    def __init__(self, name: str, tick_fn: Callable[[], None], tick_seconds: float):
        super().__init__(name=name, daemon=True)
        self.tick_fn = tick_fn
        self.tick_seconds = tick_seconds
        self._halt = threading.Event()

    def run(self) -> None:
        while not self._halt.is_set():
            try:
                self.tick_fn()
            except Exception:
                logger.exception("%s tick failed", self.name)
            self._halt.wait(self.tick_seconds)

    def stop(self, join_timeout: float = 10.0) -> None:
        self._halt.set()
        self.join(timeout=join_timeout)


class BackgroundLoops:
    """Owns the scheduler and dispatcher threads for one service process."""

    def __init__(
        self,
        scheduler_tick: Callable[[], None],
        dispatcher_tick: Callable[[], None],
        tick_seconds: float,
        health: HealthState,
    ):
        def _scheduler():
            scheduler_tick()
            health.record_scheduler_tick()

        self._threads = [
            _Loop("safespace-scheduler", _scheduler, tick_seconds),
            _Loop("safespace-dispatcher", dispatcher_tick, tick_seconds),
        ]

    def start(self) -> None:
        for thread in self._threads:
            thread.start()

    def stop(self) -> None:
        # Drain: each loop finishes its in-flight tick before joining.
        for thread in self._threads:
            thread.stop()
