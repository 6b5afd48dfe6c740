"""Check-in schedules as a race-free state machine.

All transitions for one schedule are serialized under a per-schedule lock
and decided by comparing the observed clock against the *stored* deadline,
never by handler arrival order. A checked-in deadline can't fire; a missed
deadline fires exactly once per (schedule, deadline) thanks to the alert
idempotency key, even across crashes and restarts.

States: Active, Paused, Triggered, Disarmed.
Events: check_in, deadline (via poll), pause, resume, disarm.
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum

from safespace.alerts.contacts import contacts_for_user
from safespace.alerts.dispatch import AlertDispatcher
from safespace.alerts.types import Alert, GeoLocation
from safespace.clock import Clock, parse_rfc3339, rfc3339
from safespace.errors import (
    IntervalTooShort,
    InvalidLocation,
    InvalidState,
    NoEmergencyContacts,
    ValidationError,
)
from safespace.store import EventKind, HistoryEvent

logger = logging.getLogger(__name__)

MIN_INTERVAL_S = 60
MAX_SOS_NOTE_BYTES = 500


class ScheduleState(Enum):
    ACTIVE = "Active"
    PAUSED = "Paused"
    TRIGGERED = "Triggered"
    DISARMED = "Disarmed"


@dataclass
class CheckInSchedule:
    schedule_id: str
    user_id: str
    interval_s: int
    state: ScheduleState
    last_check_in: datetime
    next_deadline: datetime
    created_at: datetime

    def to_doc(self) -> dict:
        return {
            "schedule_id": self.schedule_id,
            "user_id": self.user_id,
            "interval_seconds": self.interval_s,
            "state": self.state.value,
            "last_check_in": rfc3339(self.last_check_in),
            "next_deadline": rfc3339(self.next_deadline),
            "created_at": rfc3339(self.created_at),
        }

    @staticmethod
    def from_doc(doc: dict) -> "CheckInSchedule":
        return CheckInSchedule(
            schedule_id=doc["schedule_id"],
            user_id=doc["user_id"],
            interval_s=doc["interval_seconds"],
            state=ScheduleState(doc["state"]),
            last_check_in=parse_rfc3339(doc["last_check_in"]),
            next_deadline=parse_rfc3339(doc["next_deadline"]),
            created_at=parse_rfc3339(doc["created_at"]),
        )

    def to_json(self) -> dict:
        return self.to_doc()


@dataclass(frozen=True)
class SosRequest:
    user_id: str
    location: GeoLocation | None = None
    note: str | None = None


class SafetyPingService:
    def __init__(self, store, dispatcher: AlertDispatcher, clock: Clock):
        self.store = store
        self.dispatcher = dispatcher
        self.clock = clock
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, schedule_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(schedule_id, threading.Lock())

    def _user(self, user_id: str) -> dict:
        return self.store.get("users", user_id)

    def _load(self, schedule_id: str) -> CheckInSchedule:
        return CheckInSchedule.from_doc(self.store.get("schedules", schedule_id))

    def _save(self, schedule: CheckInSchedule) -> None:
        self.store.put("schedules", schedule.schedule_id, schedule.to_doc())

    def _history(self, user_id: str, kind: EventKind, summary: str) -> None:
        self.store.append_history(
            HistoryEvent(
                event_id=uuid.uuid4().hex,
                user_id=user_id,
                kind=kind,
                summary=summary,
                occurred_at=self.clock.now(),
            )
        )

    # --- lifecycle --------------------------------------------------------

    def create_schedule(self, user_id: str, interval_s: int) -> CheckInSchedule:
        if interval_s < MIN_INTERVAL_S:
            raise IntervalTooShort(f"interval {interval_s}s is below the {MIN_INTERVAL_S}s minimum")
        self._user(user_id)
        if not contacts_for_user(self.store, user_id):
            raise NoEmergencyContacts(f"user {user_id} must configure at least one emergency contact")
        now = self.clock.now()
        schedule = CheckInSchedule(
            schedule_id=uuid.uuid4().hex,
            user_id=user_id,
            interval_s=interval_s,
            state=ScheduleState.ACTIVE,
            last_check_in=now,
            next_deadline=now + timedelta(seconds=interval_s),
            created_at=now,
        )
        self._save(schedule)
        return schedule

    def get_schedule(self, schedule_id: str) -> CheckInSchedule:
        return self._load(schedule_id)

    def list_schedules(self, user_id: str | None = None) -> list[CheckInSchedule]:
        where = {"user_id": user_id} if user_id else None
        schedules = [CheckInSchedule.from_doc(d) for d in self.store.list("schedules", where)]
        return sorted(schedules, key=lambda s: s.created_at)

    # --- transitions ------------------------------------------------------

    def check_in(self, schedule_id: str) -> CheckInSchedule:
        """Record a check-in.

        On-time (observed now < stored deadline): the window advances and no
        alert can ever fire for the old deadline. Late on a still-Active
        schedule: the missed deadline fires first (idempotent), then the
        schedule re-arms. On a Triggered schedule: re-arm; the already-sent
        alert is never retracted.
        """
        with self._lock(schedule_id):
            schedule = self._load(schedule_id)
            now = self.clock.now()
            if schedule.state in (ScheduleState.PAUSED, ScheduleState.DISARMED):
                raise InvalidState(f"cannot check in on a {schedule.state.value} schedule")
            late = schedule.state is ScheduleState.TRIGGERED
            if schedule.state is ScheduleState.ACTIVE and now >= schedule.next_deadline:
                # Deadline already passed: it counts as missed even if the
                # poller has not observed it yet.
                self._fire_missed_deadline(schedule)
                late = True
            schedule.last_check_in = now
            schedule.next_deadline = now + timedelta(seconds=schedule.interval_s)
            schedule.state = ScheduleState.ACTIVE
            self._save(schedule)
            if late:
                self._history(schedule.user_id, EventKind.LATE_CHECK_IN,
                              f"late check-in; schedule {schedule_id} re-armed")
            else:
                self._history(schedule.user_id, EventKind.CHECK_IN,
                              f"checked in; next deadline {rfc3339(schedule.next_deadline)}")
            return schedule

    def pause_schedule(self, schedule_id: str) -> CheckInSchedule:
        with self._lock(schedule_id):
            schedule = self._load(schedule_id)
            if schedule.state is not ScheduleState.ACTIVE:
                raise InvalidState(f"can only pause an Active schedule, not {schedule.state.value}")
            schedule.state = ScheduleState.PAUSED
            self._save(schedule)
            return schedule

    def resume_schedule(self, schedule_id: str) -> CheckInSchedule:
        with self._lock(schedule_id):
            schedule = self._load(schedule_id)
            if schedule.state is not ScheduleState.PAUSED:
                raise InvalidState(f"can only resume a Paused schedule, not {schedule.state.value}")
            now = self.clock.now()
            schedule.state = ScheduleState.ACTIVE
            schedule.last_check_in = now
            schedule.next_deadline = now + timedelta(seconds=schedule.interval_s)
            self._save(schedule)
            return schedule

    def disarm_schedule(self, schedule_id: str) -> CheckInSchedule:
        with self._lock(schedule_id):
            schedule = self._load(schedule_id)
            schedule.state = ScheduleState.DISARMED
            self._save(schedule)
            return schedule

    # --- deadline polling ---------------------------------------------------

    def poll_deadlines(self) -> list[Alert]:
        """Fire every Active schedule whose stored deadline has passed.

        A failed enqueue leaves the schedule Active so the next tick retries;
        the (schedule, deadline) idempotency key prevents duplicates.
        """
        now = self.clock.now()
        fired: list[Alert] = []
        for doc in self.store.list("schedules", {"state": ScheduleState.ACTIVE.value}):
            schedule_id = doc["schedule_id"]
            with self._lock(schedule_id):
                schedule = self._load(schedule_id)
                if schedule.state is not ScheduleState.ACTIVE or schedule.next_deadline > now:
                    continue
                try:
                    alert = self._fire_missed_deadline(schedule)
                except Exception as exc:  # enqueue failed; retry next tick
                    logger.warning("alert enqueue failed for schedule %s: %s", schedule_id, exc)
                    continue
                schedule.state = ScheduleState.TRIGGERED
                self._save(schedule)
                fired.append(alert)
        return fired

    def _fire_missed_deadline(self, schedule: CheckInSchedule) -> Alert:
        """Create and enqueue the MissedCheckIn alert for the stored deadline."""
        user = self._user(schedule.user_id)
        contacts = contacts_for_user(self.store, schedule.user_id)
        location = GeoLocation.from_json(user["last_location"]) if user.get("last_location") else None
        alert = self.dispatcher.build_missed_checkin_alert(
            user_id=schedule.user_id,
            display_name=user.get("display_name", schedule.user_id),
            schedule_id=schedule.schedule_id,
            deadline=schedule.next_deadline,
            location=location,
        )
        self.dispatcher.enqueue(alert, contacts)
        return alert

    # --- SOS ----------------------------------------------------------------

    def trigger_sos(self, request: SosRequest) -> Alert:
        """Create and enqueue an SOS alert immediately; no timer involvement."""
        user = self._user(request.user_id)
        contacts = contacts_for_user(self.store, request.user_id)
        if not contacts:
            raise NoEmergencyContacts(f"user {request.user_id} has no emergency contacts")
        if request.note is not None and len(request.note.encode("utf-8")) > MAX_SOS_NOTE_BYTES:
            raise ValidationError(f"SOS note exceeds {MAX_SOS_NOTE_BYTES} bytes")
        if request.location is not None and request.location.captured_at > self.clock.now():
            raise InvalidLocation("location capture time is in the future")
        alert = self.dispatcher.build_sos_alert(
            user_id=request.user_id,
            display_name=user.get("display_name", request.user_id),
            location=request.location,
            note=request.note,
        )
        self.dispatcher.enqueue(alert, contacts)
        if request.location is not None:
            record = self.store.get_record("users", request.user_id)
            doc = dict(record.document)
            doc["last_location"] = request.location.to_json()
            self.store.put("users", request.user_id, doc, expected_version=record.version)
        self._history(
            request.user_id,
            EventKind.SOS_TRIGGERED,
            "SOS triggered" + (" (location attached)" if request.location else " (location unavailable)"),
        )
        return alert
