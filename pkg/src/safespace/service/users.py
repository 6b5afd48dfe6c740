"""User records and bearer-token lookup.

Auth is a static per-user token (128-bit, generated at user creation);
full account management is out of scope. Token verification compares in
constant time against every candidate so the response never reveals
whether a user exists.
"""

from __future__ import annotations

import hmac
import secrets
import uuid


def create_user(store, display_name: str) -> dict:
    user = {
        "user_id": uuid.uuid4().hex,
        "display_name": display_name,
        "token": secrets.token_hex(16),
    }
    store.put("users", user["user_id"], user)
    return user


def find_user_by_token(store, token: str) -> dict | None:
    if not token:
        return None
    match = None
    for user in store.list("users"):
        if hmac.compare_digest(user.get("token", ""), token):
            match = user
    return match
