"""Alert message rendering.

Deterministic by construction: fixed field order, LF line endings, explicit
Date and Message-ID headers derived from the alert itself. Formatting the
same alert for the same contact twice yields byte-identical messages.
"""

from __future__ import annotations

import hashlib
from datetime import datetime
from email.message import EmailMessage
from email.utils import format_datetime

from safespace.alerts.contacts import EmergencyContact
from safespace.alerts.types import Alert, AlertKind, GeoLocation
from safespace.clock import rfc3339

KIND_LABELS = {
    AlertKind.MISSED_CHECK_IN: "Missed check-in",
    AlertKind.SOS: "SOS",
}

LOCATION_UNAVAILABLE = "location unavailable"


def map_link(location: GeoLocation) -> str:
    return f"https://maps.google.com/?q={location.latitude:.6f},{location.longitude:.6f}"


def render_alert_body(
    kind: AlertKind,
    display_name: str,
    created_at: datetime,
    location: GeoLocation | None,
    note: str | None = None,
) -> str:
    """Canonical alert body, shared by every recipient of the alert."""
    lines = [
        "SafeSpace emergency alert",
        "",
        f"Kind: {KIND_LABELS[kind]}",
        f"User: {display_name}",
        f"Time: {rfc3339(created_at)}",
    ]
    if location is not None:
        coords = f"{location.latitude:.6f}, {location.longitude:.6f}"
        if location.accuracy_m is not None:
            coords += f" (accuracy {location.accuracy_m:.0f} m)"
        lines.append(f"Location: {coords}")
        lines.append(f"Map: {map_link(location)}")
    else:
        lines.append(f"Location: {LOCATION_UNAVAILABLE}")
    if kind is AlertKind.SOS and note:
        lines.append(f"Note: {note}")
    lines += [
        "",
        f"This alert was sent automatically by SafeSpace on behalf of {display_name}.",
        "If this is an emergency, contact local emergency services immediately.",
    ]
    return "\n".join(lines) + "\n"


def _message_id(alert_id: str, recipient: str) -> str:
    suffix = hashlib.sha256(recipient.encode("utf-8")).hexdigest()[:12]
    return f"<{alert_id}.{suffix}@safespace.local>"


def format_alert(alert: Alert, display_name: str, contact: EmergencyContact, sender: str) -> EmailMessage:
    """Build the plain-text MIME message for one recipient.

    The Message-ID embeds the alert id so downstream systems can dedup
    retried deliveries.
    """
    message = EmailMessage()
    message["From"] = sender
    message["To"] = f"{contact.name} <{contact.email}>"
    message["Subject"] = f"[SafeSpace ALERT] {KIND_LABELS[alert.kind]} — {display_name}"
    message["Date"] = format_datetime(alert.created_at)
    message["Message-ID"] = _message_id(alert.alert_id, contact.email)
    message.set_content(alert.message.replace("\r\n", "\n"))
    return message
