"""Outbox-pattern alert dispatch: persist first, send at least once.

Enqueue is idempotent on (alert_id, recipient); the flusher is the only
writer of entry status. Every failed attempt (transient or permanent) is
retried with exponential backoff until max_attempts, then marked Failed.
"""

from __future__ import annotations

import logging
import uuid
from dataclasses import dataclass
from datetime import datetime, timedelta

from safespace.alerts.contacts import EmergencyContact
from safespace.alerts.format import format_alert, render_alert_body
from safespace.alerts.smtp import DeliveryOutcome, MailTransport
from safespace.alerts.types import (
    Alert,
    AlertKind,
    AlertStatus,
    GeoLocation,
    OutboxEntry,
    missed_checkin_alert_id,
)
from safespace.clock import Clock
from safespace.errors import NoEmergencyContacts, NotFound
from safespace.store import EventKind, HistoryEvent

logger = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 8
BACKOFF_BASE_S = 10.0
BACKOFF_CAP_S = 3600.0


def backoff_delay_s(attempts: int, base_s: float = BACKOFF_BASE_S, cap_s: float = BACKOFF_CAP_S) -> float:
    return min((2.0 ** attempts) * base_s, cap_s)


@dataclass
class DispatchSummary:
    attempted: int = 0
    sent: int = 0
    retried: int = 0
    failed: int = 0

    def to_json(self) -> dict:
        return {"attempted": self.attempted, "sent": self.sent, "retried": self.retried, "failed": self.failed}


class AlertDispatcher:
    def __init__(
        self,
        store,
        clock: Clock,
        sender: str = "alerts@safespace.local",
        max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    ):
        self.store = store
        self.clock = clock
        self.sender = sender
        self.max_attempts = max_attempts

    # --- alert construction ---------------------------------------------

    def build_missed_checkin_alert(
        self,
        user_id: str,
        display_name: str,
        schedule_id: str,
        deadline: datetime,
        location: GeoLocation | None,
    ) -> Alert:
        created_at = self.clock.now()
        return Alert(
            alert_id=missed_checkin_alert_id(schedule_id, deadline),
            kind=AlertKind.MISSED_CHECK_IN,
            user_id=user_id,
            location=location,
            message=render_alert_body(AlertKind.MISSED_CHECK_IN, display_name, created_at, location),
            created_at=created_at,
            schedule_id=schedule_id,
            deadline=deadline,
        )

    def build_sos_alert(
        self,
        user_id: str,
        display_name: str,
        location: GeoLocation | None,
        note: str | None,
    ) -> Alert:
        created_at = self.clock.now()
        return Alert(
            alert_id=uuid.uuid4().hex,
            kind=AlertKind.SOS,
            user_id=user_id,
            location=location,
            message=render_alert_body(AlertKind.SOS, display_name, created_at, location, note=note),
            created_at=created_at,
        )

    # --- outbox ----------------------------------------------------------

    def enqueue(self, alert: Alert, contacts: list[EmergencyContact]) -> list[OutboxEntry]:
        """Persist the alert and fan out one outbox entry per contact.

        Idempotent: re-enqueueing the same alert_id creates nothing new and
        returns the existing entries.
        """
        if not contacts:
            raise NoEmergencyContacts(f"user {alert.user_id} has no emergency contacts")
        try:
            existing = self.store.get("alerts", alert.alert_id)
        except NotFound:
            existing = None
        if existing is None:
            alert.status = AlertStatus.PENDING
            self.store.put("alerts", alert.alert_id, alert.to_doc())

        entries: list[OutboxEntry] = []
        for contact in contacts:
            entry = OutboxEntry(
                alert_id=alert.alert_id,
                recipient=contact.email,
                user_id=alert.user_id,
                priority=contact.priority,
                attempts=0,
                next_attempt_at=alert.created_at,
            )
            try:
                doc = self.store.get("outbox", entry.key)
                entries.append(OutboxEntry.from_doc(doc))
            except NotFound:
                self.store.put("outbox", entry.key, entry.to_doc())
                entries.append(entry)

        self._set_alert_status(alert.alert_id, AlertStatus.QUEUED)
        alert.status = AlertStatus.QUEUED
        return entries

    def _set_alert_status(self, alert_id: str, status: AlertStatus) -> None:
        record = self.store.get_record("alerts", alert_id)
        if record.document["status"] == status.value:
            return
        doc = dict(record.document)
        doc["status"] = status.value
        self.store.put("alerts", alert_id, doc, expected_version=record.version)

    def pending_entries(self, due_only: bool = True) -> list[OutboxEntry]:
        now = self.clock.now()
        entries = [OutboxEntry.from_doc(d) for d in self.store.list("outbox", {"status": "Pending"})]
        if due_only:
            entries = [e for e in entries if e.next_attempt_at <= now]
        return sorted(entries, key=lambda e: (e.user_id, e.priority, e.recipient))

    def pending_count(self) -> int:
        return len(self.store.list("outbox", {"status": "Pending"}))

    def flush_outbox(self, transport: MailTransport) -> DispatchSummary:
        """Attempt every due entry once. Single-flusher by contract."""
        summary = DispatchSummary()
        now = self.clock.now()
        touched_alerts: set[str] = set()
        for entry in self.pending_entries():
            summary.attempted += 1
            touched_alerts.add(entry.alert_id)
            try:
                alert = Alert.from_doc(self.store.get("alerts", entry.alert_id))
                user = self.store.get("users", alert.user_id)
            except NotFound as exc:
                logger.error("outbox entry %s references missing record: %s", entry.key, exc)
                entry.status = "Failed"
                entry.last_error = f"missing record: {exc}"
                self.store.put("outbox", entry.key, entry.to_doc())
                summary.failed += 1
                continue
            contact = EmergencyContact(
                contact_id="",
                user_id=entry.user_id,
                name=self._contact_name(entry),
                email=entry.recipient,
                priority=entry.priority,
            )
            message = format_alert(alert, user.get("display_name", alert.user_id), contact, self.sender)
            result = transport.send(message, entry.recipient)
            entry.attempts += 1
            if result.outcome is DeliveryOutcome.DELIVERED:
                entry.status = "Sent"
                entry.last_error = None
                summary.sent += 1
            else:
                entry.last_error = result.detail
                if entry.attempts >= self.max_attempts:
                    entry.status = "Failed"
                    summary.failed += 1
                else:
                    entry.next_attempt_at = now + timedelta(seconds=backoff_delay_s(entry.attempts))
                    summary.retried += 1
            self.store.put("outbox", entry.key, entry.to_doc())
        for alert_id in touched_alerts:
            self._roll_up(alert_id)
        return summary

    def _contact_name(self, entry: OutboxEntry) -> str:
        from safespace.alerts.contacts import contacts_for_user

        for contact in contacts_for_user(self.store, entry.user_id):
            if contact.email == entry.recipient:
                return contact.name
        return entry.recipient

    def _roll_up(self, alert_id: str) -> None:
        """Derive alert status from its entries; log history on full delivery."""
        entries = [OutboxEntry.from_doc(d) for d in self.store.list("outbox", {"alert_id": alert_id})]
        if not entries:
            return
        statuses = {e.status for e in entries}
        record = self.store.get_record("alerts", alert_id)
        previous = record.document["status"]
        if statuses == {"Sent"}:
            new_status = AlertStatus.SENT
        elif "Pending" in statuses:
            new_status = AlertStatus.QUEUED
        else:
            new_status = AlertStatus.FAILED
        if previous == new_status.value:
            return
        doc = dict(record.document)
        doc["status"] = new_status.value
        self.store.put("alerts", alert_id, doc, expected_version=record.version)
        if new_status is AlertStatus.SENT:
            kind = AlertKind(doc["kind"]).value
            self.store.append_history(
                HistoryEvent(
                    event_id=uuid.uuid4().hex,
                    user_id=doc["user_id"],
                    kind=EventKind.ALERT_SENT,
                    summary=f"{kind} alert delivered to {len(entries)} contact(s)",
                    occurred_at=self.clock.now(),
                )
            )

    def alert_latency_s(self, alert: Alert) -> float | None:
        """Seconds from missed deadline to alert creation (enqueue time)."""
        if alert.deadline is None:
            return None
        return (alert.created_at - alert.deadline).total_seconds()

    def list_alerts(self, where: dict | None = None) -> list[Alert]:
        return [Alert.from_doc(d) for d in self.store.list("alerts", where)]

    def entries_for_alert(self, alert_id: str) -> list[OutboxEntry]:
        return [OutboxEntry.from_doc(d) for d in self.store.list("outbox", {"alert_id": alert_id})]
