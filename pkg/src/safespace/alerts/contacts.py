"""Emergency contact validation and storage.

Contacts live in the `contacts` collection as one document per user
(full-list replacement matches the API's PUT semantics).
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass

from safespace.errors import InvalidContact

MAX_CONTACTS = 10

# Pragmatic addr-spec check: printable local part, dotted domain.
_EMAIL_RE = re.compile(r"^[A-Za-z0-9._%+-]+@[A-Za-z0-9]([A-Za-z0-9-]*[A-Za-z0-9])?(\.[A-Za-z0-9]([A-Za-z0-9-]*[A-Za-z0-9])?)+$")


def validate_email(address: str) -> str:
    if not _EMAIL_RE.match(address or ""):
        raise InvalidContact(f"invalid email address: {address!r}")
    return address


@dataclass(frozen=True)
class EmergencyContact:
    contact_id: str
    user_id: str
    name: str
    email: str
    priority: int  # 1 = first

    def to_json(self) -> dict:
        return {
            "contact_id": self.contact_id,
            "name": self.name,
            "email": self.email,
            "priority": self.priority,
        }


def validate_contacts(user_id: str, raw: list[dict]) -> list[EmergencyContact]:
    """Validate a full contact list: valid emails, unique priorities, <= 10."""
    if len(raw) > MAX_CONTACTS:
        raise InvalidContact(f"at most {MAX_CONTACTS} contacts per user, got {len(raw)}")
    contacts = []
    priorities: set[int] = set()
    for i, item in enumerate(raw):
        email = validate_email(str(item.get("email", "")))
        name = str(item.get("name", "")).strip()
        if not name:
            raise InvalidContact(f"contacts[{i}]: name is required")
        try:
            priority = int(item["priority"])
        except (KeyError, TypeError, ValueError):
            raise InvalidContact(f"contacts[{i}]: integer priority is required") from None
        if priority < 1:
            raise InvalidContact(f"contacts[{i}]: priority must be >= 1")
        if priority in priorities:
            raise InvalidContact(f"contacts[{i}]: duplicate priority {priority}")
        priorities.add(priority)
        contacts.append(
            EmergencyContact(
                contact_id=item.get("contact_id") or uuid.uuid4().hex,
                user_id=user_id,
                name=name,
                email=email,
                priority=priority,
            )
        )
    return sorted(contacts, key=lambda c: c.priority)


def save_contacts(store, user_id: str, contacts: list[EmergencyContact]) -> None:
    store.put(
        "contacts",
        user_id,
        {"user_id": user_id, "contacts": [c.to_json() for c in contacts]},
    )


def contacts_for_user(store, user_id: str) -> list[EmergencyContact]:
    from safespace.errors import NotFound

    try:
        doc = store.get("contacts", user_id)
    except NotFound:
        return []
    contacts = [
        EmergencyContact(
            contact_id=item["contact_id"],
            user_id=user_id,
            name=item["name"],
            email=item["email"],
            priority=item["priority"],
        )
        for item in doc.get("contacts", [])
    ]
    return sorted(contacts, key=lambda c: c.priority)
