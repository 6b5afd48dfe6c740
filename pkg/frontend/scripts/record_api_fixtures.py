"""Record real service responses as contract fixtures for the UI tests.

Boots the backend in-process, drives the documented endpoints, and writes
each JSON body (plus status) under frontend/tests/fixtures/. Rerun whenever
the API contract changes:

    python3 frontend/scripts/record_api_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from safespace.alerts.smtp import DeliveryOutcome, DeliveryResult
from safespace.clock import SimulatedClock
from safespace.service.app import create_app, create_state
from safespace.service.config import AppConfig
from safespace.service.users import create_user
from safespace.store import MemoryStore

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

ABUSIVE_TEXT = "You're such a loser. I hate you."
SIXTY_PERCENT_ANSWERS = {
    "q01": 3, "q02": 3, "q03": 3, "q06": 1, "q07": 3, "q08": 3, "q09": 3, "q12": 3,
    "q14": 4, "q15": 4, "q17": 1, "q20": 1,
    "q04": 2, "q05": 2, "q10": 2, "q11": 2, "q16": 2, "q19": 2,
    "q13": 2, "q18": 2,
}


class NullTransport:
    def send(self, message, recipient):
        return DeliveryResult(DeliveryOutcome.DELIVERED)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    config = AppConfig(data_dir=":memory:", start_loops=False)
    state = create_state(config, store=MemoryStore(), clock=SimulatedClock(), transport=NullTransport())
    user = create_user(state.store, "Asha")
    recorded: dict[str, dict] = {}

    def record(name: str, response) -> dict:
        recorded[name] = {"status": response.status_code, "body": response.json()}
        return recorded[name]["body"]

    with TestClient(create_app(state)) as client:
        client.headers.update({"Authorization": f"Bearer {user['token']}"})

        record("analyze_abusive", client.post("/api/analyze/text", json={"text": ABUSIVE_TEXT}))
        record("analyze_clean", client.post("/api/analyze/text", json={"text": "See you at lunch tomorrow!"}))
        record("error_empty_text", client.post("/api/analyze/text", json={"text": "  "}))
        record("error_unauthenticated",
               client.get("/api/schedules", headers={"Authorization": "Bearer wrong"}))

        contacts = [
            {"name": "Maya", "email": "maya@example.org", "priority": 1},
            {"name": "Ravi", "email": "ravi@example.org", "priority": 2},
        ]
        record("contacts_put", client.put("/api/contacts", json={"contacts": contacts}))
        record("contacts_get", client.get("/api/contacts"))

        schedule = record("schedule_created", client.post("/api/schedules", json={"interval_seconds": 43200}))
        state.clock.advance(600)
        record("schedule_checkin", client.post(f"/api/schedules/{schedule['schedule_id']}/checkin"))
        record("schedules_list", client.get("/api/schedules"))
        record("error_interval_too_short", client.post("/api/schedules", json={"interval_seconds": 30}))

        record("sos_alert", client.post("/api/sos", json={"lat": 12.9716, "lon": 77.5946, "note": "please call"}))
        record("error_bad_latitude", client.post("/api/sos", json={"lat": 95, "lon": 10}))

        record("questionnaire_definition", client.get("/api/questionnaire/relationship_v1"))
        record("assessment_sixty_percent",
               client.post("/api/questionnaire/relationship_v1/submit", json={"answers": SIXTY_PERCENT_ANSWERS}))

        record("history", client.get("/api/history"))
        record("healthz", client.get("/healthz"))

    for name, payload in recorded.items():
        (OUT / f"{name}.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"recorded {len(recorded)} fixtures to {OUT}")


if __name__ == "__main__":
    main()
