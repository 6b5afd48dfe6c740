"""Discrete-event reliability simulation.

Drives the real scheduler, state machine, and outbox dispatcher under a
simulated clock: N schedules with random intervals perform a few on-time
check-ins and then go silent; the poller fires their missed deadlines and a
transport that fails with probability F delivers the alerts. The run keeps
its own accounting (planned misses, observed alerts, delivery outcomes)
independent of the modules under test, so the printed report doubles as an
oracle: delivered/expected must be 1.0 and no (schedule, deadline) pair may
alert twice.

Everything is in memory and sleep-free; identical seeds produce identical
reports.
"""

from __future__ import annotations

import heapq
import random
import uuid
from dataclasses import dataclass, field
from email.message import EmailMessage

from safespace.alerts.contacts import EmergencyContact, save_contacts
from safespace.alerts.dispatch import AlertDispatcher
from safespace.alerts.smtp import DeliveryOutcome, DeliveryResult
from safespace.clock import SimulatedClock, rfc3339
from safespace.safety_ping import SafetyPingService
from safespace.store import MemoryStore

DEFAULT_TICK_S = 5.0
SIM_MAX_ATTEMPTS = 64  # generous cap: the run measures eventual delivery


class FlakyTransport:
    """Transport failing each attempt with fixed probability (seeded)."""

    def __init__(self, rng: random.Random, fail_rate: float):
        self.rng = rng
        self.fail_rate = fail_rate
        self.attempts = 0
        self.failures = 0
        self.delivered: list[tuple[str, str]] = []  # (message-id, recipient)

    def send(self, message: EmailMessage, recipient: str) -> DeliveryResult:
        self.attempts += 1
        if self.rng.random() < self.fail_rate:
            self.failures += 1
            return DeliveryResult(DeliveryOutcome.TRANSIENT_FAILURE, "simulated outage")
        self.delivered.append((message["Message-ID"], recipient))
        return DeliveryResult(DeliveryOutcome.DELIVERED)


@dataclass
class SimConfig:
    schedules: int
    seed: int = 0
    fail_rate: float = 0.0
    tick_s: float = DEFAULT_TICK_S
    max_checkins: int = 3


@dataclass
class SimReport:
    schedules: int
    seed: int
    fail_rate: float
    tick_s: float
    checkins_performed: int
    expected_alerts: int
    alerts_created: int
    duplicate_alerts: int
    delivered_alerts: int
    delivered_ratio: float
    messages_expected: int
    messages_sent: int
    send_attempts: int
    transport_failures: int
    latency_s: dict = field(default_factory=dict)  # min/mean/p95/max over alert enqueue - deadline
    max_latency_within_tick: bool = True
    sim_duration_s: float = 0.0

    def to_json(self) -> dict:
        return {
            "schedules": self.schedules,
            "seed": self.seed,
            "fail_rate": self.fail_rate,
            "tick_s": self.tick_s,
            "checkins_performed": self.checkins_performed,
            "expected_alerts": self.expected_alerts,
            "alerts_created": self.alerts_created,
            "duplicate_alerts": self.duplicate_alerts,
            "delivered_alerts": self.delivered_alerts,
            "delivered_ratio": self.delivered_ratio,
            "messages_expected": self.messages_expected,
            "messages_sent": self.messages_sent,
            "send_attempts": self.send_attempts,
            "transport_failures": self.transport_failures,
            "latency_s": self.latency_s,
            "max_latency_within_tick": self.max_latency_within_tick,
            "sim_duration_s": self.sim_duration_s,
        }


def _percentile(sorted_values: list[float], fraction: float) -> float:
    if not sorted_values:
        return 0.0
    index = min(len(sorted_values) - 1, int(fraction * (len(sorted_values) - 1) + 0.5))
    return sorted_values[index]


def run_simulation(config: SimConfig) -> SimReport:
    if config.schedules == 0:
        return SimReport(
            schedules=0, seed=config.seed, fail_rate=config.fail_rate, tick_s=config.tick_s,
            checkins_performed=0, expected_alerts=0, alerts_created=0, duplicate_alerts=0,
            delivered_alerts=0, delivered_ratio=1.0, messages_expected=0, messages_sent=0,
            send_attempts=0, transport_failures=0, latency_s={}, max_latency_within_tick=True,
        )

    rng = random.Random(config.seed)
    store = MemoryStore()
    clock = SimulatedClock()
    transport = FlakyTransport(random.Random(rng.random()), config.fail_rate)
    dispatcher = AlertDispatcher(store, clock, max_attempts=SIM_MAX_ATTEMPTS)
    ping = SafetyPingService(store, dispatcher, clock)
    start = clock.now()

    # Plan: per schedule, a few on-time check-ins and then one missed deadline.
    # All times are known upfront, so the expected alert set is an oracle
    # computed before the modules under test run.
    expected: dict[str, float] = {}  # schedule_id -> missed deadline offset (s)
    checkin_events: list[tuple[float, int, str]] = []
    messages_expected = 0
    sequence = 0
    for i in range(config.schedules):
        user = {"user_id": f"sim-user-{i:05d}", "display_name": f"Sim User {i}", "token": uuid.uuid4().hex}
        store.put("users", user["user_id"], user)
        n_contacts = rng.randint(1, 3)
        contacts = [
            EmergencyContact(
                contact_id=uuid.uuid4().hex,
                user_id=user["user_id"],
                name=f"Contact {j + 1}",
                email=f"contact{j + 1}.{i:05d}@sim.example",
                priority=j + 1,
            )
            for j in range(n_contacts)
        ]
        save_contacts(store, user["user_id"], contacts)
        messages_expected += n_contacts

        interval = rng.randint(60, 600)
        schedule = ping.create_schedule(user["user_id"], interval)
        deadline = float(interval)
        for _ in range(rng.randint(0, config.max_checkins)):
            checkin_at = deadline - rng.uniform(1.0, interval - 1.0)
            sequence += 1
            checkin_events.append((checkin_at, sequence, schedule.schedule_id))
            deadline = checkin_at + interval
        expected[schedule.schedule_id] = deadline

    heapq.heapify(checkin_events)
    checkins_performed = 0

    def advance_to(offset_s: float) -> None:
        target = (offset_s) - (clock.now() - start).total_seconds()
        if target > 0:
            clock.advance(target)

    # Drive ticks and check-ins in time order until every planned deadline has
    # fired and the outbox is drained.
    horizon = max(expected.values())
    tick = 0
    while True:
        now_offset = tick * config.tick_s
        while checkin_events and checkin_events[0][0] <= now_offset:
            at, _, schedule_id = heapq.heappop(checkin_events)
            advance_to(at)
            ping.check_in(schedule_id)
            checkins_performed += 1
        advance_to(now_offset)
        ping.poll_deadlines()
        dispatcher.flush_outbox(transport)
        if now_offset > horizon and not checkin_events and dispatcher.pending_count() == 0:
            break
        tick += 1

    # Accounting against the plan.
    alerts = dispatcher.list_alerts({"kind": "MissedCheckIn"})
    seen_pairs: dict[tuple[str, str], int] = {}
    for alert in alerts:
        pair = (alert.schedule_id or "", rfc3339(alert.deadline) if alert.deadline else "")
        seen_pairs[pair] = seen_pairs.get(pair, 0) + 1
    duplicates = sum(count - 1 for count in seen_pairs.values())

    latencies = sorted(
        (alert.created_at - alert.deadline).total_seconds() for alert in alerts if alert.deadline
    )
    delivered = 0
    for alert in alerts:
        entries = dispatcher.entries_for_alert(alert.alert_id)
        if entries and all(e.status == "Sent" for e in entries):
            delivered += 1

    return SimReport(
        schedules=config.schedules,
        seed=config.seed,
        fail_rate=config.fail_rate,
        tick_s=config.tick_s,
        checkins_performed=checkins_performed,
        expected_alerts=len(expected),
        alerts_created=len(alerts),
        duplicate_alerts=duplicates,
        delivered_alerts=delivered,
        delivered_ratio=delivered / len(expected) if expected else 1.0,
        messages_expected=messages_expected,
        messages_sent=len(transport.delivered),
        send_attempts=transport.attempts,
        transport_failures=transport.failures,
        latency_s={
            "min": latencies[0] if latencies else 0.0,
            "mean": sum(latencies) / len(latencies) if latencies else 0.0,
            "p95": _percentile(latencies, 0.95),
            "max": latencies[-1] if latencies else 0.0,
        },
        max_latency_within_tick=(not latencies or latencies[-1] <= config.tick_s),
        sim_duration_s=(clock.now() - start).total_seconds(),
    )
