"""Alert and delivery domain types."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from datetime import datetime
from enum import Enum

from safespace.clock import parse_rfc3339, rfc3339
from safespace.errors import InvalidLocation


@dataclass(frozen=True)
class GeoLocation:
    latitude: float
    longitude: float
    captured_at: datetime
    accuracy_m: float | None = None

    def __post_init__(self):
        if not (-90.0 <= self.latitude <= 90.0):
            raise InvalidLocation(f"latitude {self.latitude} outside [-90, 90]")
        if not (-180.0 <= self.longitude <= 180.0):
            raise InvalidLocation(f"longitude {self.longitude} outside [-180, 180]")

    def to_json(self) -> dict:
        doc: dict = {
            "latitude": self.latitude,
            "longitude": self.longitude,
            "captured_at": rfc3339(self.captured_at),
        }
        if self.accuracy_m is not None:
            doc["accuracy_m"] = self.accuracy_m
        return doc

    @staticmethod
    def from_json(doc: dict) -> "GeoLocation":
        return GeoLocation(
            latitude=doc["latitude"],
            longitude=doc["longitude"],
            captured_at=parse_rfc3339(doc["captured_at"]),
            accuracy_m=doc.get("accuracy_m"),
        )


class AlertKind(Enum):
    MISSED_CHECK_IN = "MissedCheckIn"
    SOS = "Sos"


class AlertStatus(Enum):
    PENDING = "Pending"
    QUEUED = "Queued"
    SENT = "Sent"
    FAILED = "Failed"


def missed_checkin_alert_id(schedule_id: str, deadline: datetime) -> str:
    """Idempotency key: one alert per (schedule, deadline), ever."""
    digest = hashlib.sha256(f"{schedule_id}|{rfc3339(deadline)}".encode("utf-8")).hexdigest()
    return digest[:32]


@dataclass
class Alert:
    alert_id: str
    kind: AlertKind
    user_id: str
    location: GeoLocation | None
    message: str
    created_at: datetime
    status: AlertStatus = AlertStatus.PENDING
    # MissedCheckIn provenance; lets dedup and latency checks work off the record.
    schedule_id: str | None = None
    deadline: datetime | None = None

    def to_doc(self) -> dict:
        return {
            "alert_id": self.alert_id,
            "kind": self.kind.value,
            "user_id": self.user_id,
            "location": self.location.to_json() if self.location else None,
            "message": self.message,
            "created_at": rfc3339(self.created_at),
            "status": self.status.value,
            "schedule_id": self.schedule_id,
            "deadline": rfc3339(self.deadline) if self.deadline else None,
        }

    @staticmethod
    def from_doc(doc: dict) -> "Alert":
        return Alert(
            alert_id=doc["alert_id"],
            kind=AlertKind(doc["kind"]),
            user_id=doc["user_id"],
            location=GeoLocation.from_json(doc["location"]) if doc.get("location") else None,
            message=doc["message"],
            created_at=parse_rfc3339(doc["created_at"]),
            status=AlertStatus(doc["status"]),
            schedule_id=doc.get("schedule_id"),
            deadline=parse_rfc3339(doc["deadline"]) if doc.get("deadline") else None,
        )

    def to_json(self) -> dict:
        return self.to_doc()


@dataclass
class OutboxEntry:
    alert_id: str
    recipient: str
    user_id: str
    priority: int
    attempts: int
    next_attempt_at: datetime
    status: str = "Pending"  # Pending | Sent | Failed
    last_error: str | None = None

    @property
    def key(self) -> str:
        return f"{self.alert_id}|{self.recipient}"

    def to_doc(self) -> dict:
        return {
            "alert_id": self.alert_id,
            "recipient": self.recipient,
            "user_id": self.user_id,
            "priority": self.priority,
            "attempts": self.attempts,
            "next_attempt_at": rfc3339(self.next_attempt_at),
            "status": self.status,
            "last_error": self.last_error,
        }

    @staticmethod
    def from_doc(doc: dict) -> "OutboxEntry":
        return OutboxEntry(
            alert_id=doc["alert_id"],
            recipient=doc["recipient"],
            user_id=doc["user_id"],
            priority=doc["priority"],
            attempts=doc["attempts"],
            next_attempt_at=parse_rfc3339(doc["next_attempt_at"]),
            status=doc["status"],
            last_error=doc.get("last_error"),
        )


@dataclass
class SmtpConfig:
    """SMTP endpoint configuration. Credentials are named by environment
    variable and resolved at send time; secrets never live in this object."""

    host: str = "localhost"
    port: int = 25
    starttls: bool = False
    username_env: str = "SAFESPACE_SMTP_USERNAME"
    password_env: str = "SAFESPACE_SMTP_PASSWORD"
    sender: str = "alerts@safespace.local"
    timeout_s: float = 10.0
