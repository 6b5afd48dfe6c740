from __future__ import annotations

import uuid
from pathlib import Path
from types import SimpleNamespace

import pytest

from safespace.alerts.contacts import EmergencyContact, save_contacts
from safespace.alerts.dispatch import AlertDispatcher
from safespace.alerts.smtp import DeliveryOutcome, DeliveryResult
from safespace.clock import SimulatedClock
from safespace.safety_ping import SafetyPingService
from safespace.store import MemoryStore

FIXTURES = Path(__file__).parent / "fixtures"


class FakeTransport:
    """Scriptable transport: flip `mode` between accept/down/permfail."""

    def __init__(self):
        self.mode = "accept"
        self.sent = []  # (recipient, EmailMessage)

    def send(self, message, recipient):
        if self.mode == "down":
            return DeliveryResult(DeliveryOutcome.TRANSIENT_FAILURE, "transport down")
        if self.mode == "permfail":
            return DeliveryResult(DeliveryOutcome.PERMANENT_FAILURE, "550 rejected")
        self.sent.append((recipient, message))
        return DeliveryResult(DeliveryOutcome.DELIVERED)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def sim_clock() -> SimulatedClock:
    return SimulatedClock()


@pytest.fixture
def env(sim_clock):
    """Store + dispatcher + safety-ping service wired over a simulated clock."""
    store = MemoryStore()
    transport = FakeTransport()
    dispatcher = AlertDispatcher(store, sim_clock)
    ping = SafetyPingService(store, dispatcher, sim_clock)

    def add_user(display_name: str = "Asha", n_contacts: int = 2) -> dict:
        user = {"user_id": uuid.uuid4().hex, "display_name": display_name, "token": uuid.uuid4().hex}
        store.put("users", user["user_id"], user)
        contacts = [
            EmergencyContact(
                contact_id=uuid.uuid4().hex,
                user_id=user["user_id"],
                name=f"Contact {i + 1}",
                email=f"contact{i + 1}@example.org",
                priority=i + 1,
            )
            for i in range(n_contacts)
        ]
        save_contacts(store, user["user_id"], contacts)
        return user

    return SimpleNamespace(
        store=store,
        clock=sim_clock,
        transport=transport,
        dispatcher=dispatcher,
        ping=ping,
        add_user=add_user,
    )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    reports = []
    for outcome in ("passed", "failed"):
        reports += [r for r in terminalreporter.stats.get(outcome, []) if getattr(r, "when", "") == "call"]
    acceptance = [r for r in reports if "test_acceptance" in r.nodeid]
    if not acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for report in sorted(acceptance, key=lambda r: r.nodeid):
        name = report.nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if report.passed else 'FAIL'}  {name}")
