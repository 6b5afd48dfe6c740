from safespace.alerts.contacts import (
    EmergencyContact,
    MAX_CONTACTS,
    contacts_for_user,
    save_contacts,
    validate_contacts,
    validate_email,
)
from safespace.alerts.dispatch import AlertDispatcher, DispatchSummary, backoff_delay_s
from safespace.alerts.format import format_alert, render_alert_body
from safespace.alerts.smtp import DeliveryOutcome, DeliveryResult, MailTransport, SmtpTransport, send_smtp
from safespace.alerts.types import Alert, AlertKind, AlertStatus, GeoLocation, OutboxEntry, SmtpConfig

__all__ = [
    "Alert",
    "AlertDispatcher",
    "AlertKind",
    "AlertStatus",
    "DeliveryOutcome",
    "DeliveryResult",
    "DispatchSummary",
    "EmergencyContact",
    "GeoLocation",
    "MAX_CONTACTS",
    "MailTransport",
    "OutboxEntry",
    "SmtpConfig",
    "SmtpTransport",
    "backoff_delay_s",
    "contacts_for_user",
    "format_alert",
    "render_alert_body",
    "save_contacts",
    "send_smtp",
    "validate_contacts",
    "validate_email",
]
