"""SMTP delivery with outcome classification.

A send never raises past the dispatcher: every failure is classified as
transient (4xx, timeouts, connection problems) or permanent (5xx) and
returned in the result.
"""

from __future__ import annotations

import os
import smtplib
import ssl
from dataclasses import dataclass
from email.message import EmailMessage
from enum import Enum
from typing import Protocol

from safespace.alerts.types import SmtpConfig


class DeliveryOutcome(Enum):
    DELIVERED = "Delivered"
    TRANSIENT_FAILURE = "TransientFailure"
    PERMANENT_FAILURE = "PermanentFailure"


@dataclass(frozen=True)
class DeliveryResult:
    outcome: DeliveryOutcome
    detail: str = ""


class MailTransport(Protocol):
    def send(self, message: EmailMessage, recipient: str) -> DeliveryResult: ...


def _classify_code(code: int, detail: str) -> DeliveryResult:
    if 400 <= code < 500:
        return DeliveryResult(DeliveryOutcome.TRANSIENT_FAILURE, detail)
    return DeliveryResult(DeliveryOutcome.PERMANENT_FAILURE, detail)


def send_smtp(message: EmailMessage, recipient: str, config: SmtpConfig) -> DeliveryResult:
    username = os.environ.get(config.username_env, "")
    password = os.environ.get(config.password_env, "")
    try:
        with smtplib.SMTP(config.host, config.port, timeout=config.timeout_s) as client:
            client.ehlo()
            if config.starttls:
                client.starttls(context=ssl.create_default_context())
                client.ehlo()
            if username and password:
                client.login(username, password)
            client.send_message(message, from_addr=config.sender, to_addrs=[recipient])
        return DeliveryResult(DeliveryOutcome.DELIVERED)
    except smtplib.SMTPRecipientsRefused as exc:
        code, msg = next(iter(exc.recipients.values()), (550, b""))
        return _classify_code(code, f"{code} {msg.decode('utf-8', 'replace') if isinstance(msg, bytes) else msg}")
    except smtplib.SMTPResponseException as exc:
        detail = exc.smtp_error.decode("utf-8", "replace") if isinstance(exc.smtp_error, bytes) else str(exc.smtp_error)
        return _classify_code(exc.smtp_code, f"{exc.smtp_code} {detail}")
    except smtplib.SMTPServerDisconnected as exc:
        return DeliveryResult(DeliveryOutcome.TRANSIENT_FAILURE, f"disconnected: {exc}")
    except smtplib.SMTPException as exc:
        return DeliveryResult(DeliveryOutcome.TRANSIENT_FAILURE, f"smtp error: {exc}")
    except OSError as exc:
        # Connection refused, timeouts, DNS failures.
        return DeliveryResult(DeliveryOutcome.TRANSIENT_FAILURE, f"connection error: {exc}")


class SmtpTransport:
    def __init__(self, config: SmtpConfig):
        self.config = config

    def send(self, message: EmailMessage, recipient: str) -> DeliveryResult:
        return send_smtp(message, recipient, self.config)
