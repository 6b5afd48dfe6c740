import random
import threading

import pytest

from safespace.alerts.types import AlertKind, GeoLocation, missed_checkin_alert_id
from safespace.clock import rfc3339
from safespace.errors import (
    IntervalTooShort,
    InvalidLocation,
    InvalidState,
    NoEmergencyContacts,
    NotFound,
    StorageUnavailable,
    ValidationError,
)
from safespace.safety_ping import ScheduleState, SosRequest
from safespace.store import MemoryStore


def missed_alerts(env, schedule_id=None):
    where = {"kind": "MissedCheckIn"}
    if schedule_id:
        where["schedule_id"] = schedule_id
    return env.store.list("alerts", where)


class TestCreate:
    def test_twelve_hour_schedule(self, env):
        user = env.add_user()
        t0 = env.clock.now()
        schedule = env.ping.create_schedule(user["user_id"], 43_200)
        assert schedule.state is ScheduleState.ACTIVE
        assert (schedule.next_deadline - t0).total_seconds() == 43_200
        assert schedule.last_check_in == t0

    def test_two_minute_interval_accepted(self, env):
        user = env.add_user()
        assert env.ping.create_schedule(user["user_id"], 120).interval_s == 120

    def test_thirty_seconds_too_short(self, env):
        user = env.add_user()
        with pytest.raises(IntervalTooShort):
            env.ping.create_schedule(user["user_id"], 30)

    def test_requires_emergency_contacts(self, env):
        user = env.add_user(n_contacts=0)
        with pytest.raises(NoEmergencyContacts):
            env.ping.create_schedule(user["user_id"], 3600)

    def test_unknown_user_rejected(self, env):
        with pytest.raises(NotFound):
            env.ping.create_schedule("ghost", 3600)


class TestCheckIn:
    def test_on_time_checkin_advances_window_without_alert(self, env):
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        env.clock.advance(3599)
        updated = env.ping.check_in(schedule.schedule_id)
        assert updated.state is ScheduleState.ACTIVE
        assert (updated.next_deadline - env.clock.now()).total_seconds() == 3600
        env.ping.poll_deadlines()
        assert missed_alerts(env) == []

    def test_checkin_on_triggered_rearms_without_retracting_alert(self, env):
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        env.clock.advance(3601)
        assert len(env.ping.poll_deadlines()) == 1
        updated = env.ping.check_in(schedule.schedule_id)
        assert updated.state is ScheduleState.ACTIVE
        assert len(missed_alerts(env)) == 1
        late = env.store.list("history", {"kind": "LateCheckIn"})
        assert len(late) == 1

    def test_checkin_after_disarm_rejected(self, env):
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        env.ping.disarm_schedule(schedule.schedule_id)
        with pytest.raises(InvalidState):
            env.ping.check_in(schedule.schedule_id)

    def test_late_checkin_on_active_fires_missed_deadline_first(self, env):
        """Deadline passed but the poller has not run: the check-in itself
        fires the alert for the stored deadline, then re-arms."""
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        deadline = schedule.next_deadline
        env.clock.advance(3700)
        updated = env.ping.check_in(schedule.schedule_id)
        assert updated.state is ScheduleState.ACTIVE
        alerts = missed_alerts(env, schedule.schedule_id)
        assert len(alerts) == 1
        assert alerts[0]["deadline"] == rfc3339(deadline)
        # the poller finds nothing left to fire
        assert env.ping.poll_deadlines() == []
        assert len(missed_alerts(env, schedule.schedule_id)) == 1


class TestPollDeadlines:
    def test_missed_deadline_triggers_exactly_one_alert(self, env):
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 43_200)
        env.clock.advance(43_201)
        alerts = env.ping.poll_deadlines()
        assert len(alerts) == 1
        assert alerts[0].kind is AlertKind.MISSED_CHECK_IN
        assert alerts[0].alert_id == missed_checkin_alert_id(schedule.schedule_id, schedule.next_deadline)
        assert env.ping.get_schedule(schedule.schedule_id).state is ScheduleState.TRIGGERED

    def test_no_expired_schedules_is_a_noop(self, env):
        user = env.add_user()
        env.ping.create_schedule(user["user_id"], 3600)
        env.clock.advance(10)
        assert env.ping.poll_deadlines() == []

    def test_repeat_polls_do_not_duplicate(self, env):
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        env.clock.advance(3601)
        env.ping.poll_deadlines()
        env.ping.poll_deadlines()
        assert len(missed_alerts(env, schedule.schedule_id)) == 1

    def test_failed_enqueue_leaves_active_and_retries(self, env):
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        env.clock.advance(3601)

        real_put = env.store.put
        def failing_put(collection, key, doc, expected_version=None):
            if collection == "outbox":
                raise StorageUnavailable("disk full")
            return real_put(collection, key, doc, expected_version)

        env.store.put = failing_put
        assert env.ping.poll_deadlines() == []
        assert env.ping.get_schedule(schedule.schedule_id).state is ScheduleState.ACTIVE

        env.store.put = real_put
        alerts = env.ping.poll_deadlines()
        assert len(alerts) == 1
        assert len(missed_alerts(env, schedule.schedule_id)) == 1

    def test_thousand_random_schedules_fire_exactly_once(self, env):
        """Discrete-event oracle: every (schedule, deadline) pair alerts once."""
        rng = random.Random(99)
        expected = {}
        for i in range(1000):
            user = env.add_user(display_name=f"user{i}", n_contacts=1)
            schedule = env.ping.create_schedule(user["user_id"], rng.randint(60, 600))
            expected[schedule.schedule_id] = schedule.next_deadline
        horizon = 0.0
        while horizon <= 600:
            env.clock.advance(5)
            horizon += 5
            env.ping.poll_deadlines()
        alerts = missed_alerts(env)
        assert len(alerts) == 1000
        pairs = {(a["schedule_id"], a["deadline"]) for a in alerts}
        assert pairs == {(sid, rfc3339(deadline)) for sid, deadline in expected.items()}


class TestLifecycle:
    def test_paused_schedule_never_fires(self, env):
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        env.ping.pause_schedule(schedule.schedule_id)
        env.clock.advance(100_000)
        assert env.ping.poll_deadlines() == []
        assert missed_alerts(env) == []

    def test_resume_grants_fresh_window(self, env):
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        env.ping.pause_schedule(schedule.schedule_id)
        env.clock.advance(10_000)
        resumed = env.ping.resume_schedule(schedule.schedule_id)
        assert resumed.state is ScheduleState.ACTIVE
        assert (resumed.next_deadline - env.clock.now()).total_seconds() == 3600

    def test_disarm_triggered_schedule_stops_alerts(self, env):
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        env.clock.advance(3601)
        env.ping.poll_deadlines()
        disarmed = env.ping.disarm_schedule(schedule.schedule_id)
        assert disarmed.state is ScheduleState.DISARMED
        env.clock.advance(100_000)
        assert env.ping.poll_deadlines() == []
        assert len(missed_alerts(env)) == 1


STATES = [ScheduleState.ACTIVE, ScheduleState.PAUSED, ScheduleState.TRIGGERED, ScheduleState.DISARMED]
EVENTS = ["check_in", "deadline", "pause", "resume", "disarm"]

# (state, event) -> (resulting state or "error", alert fired during the event)
TRANSITION_TABLE = {
    (ScheduleState.ACTIVE, "check_in"): (ScheduleState.ACTIVE, False),
    (ScheduleState.ACTIVE, "deadline"): (ScheduleState.TRIGGERED, True),
    (ScheduleState.ACTIVE, "pause"): (ScheduleState.PAUSED, False),
    (ScheduleState.ACTIVE, "resume"): ("error", False),
    (ScheduleState.ACTIVE, "disarm"): (ScheduleState.DISARMED, False),
    (ScheduleState.PAUSED, "check_in"): ("error", False),
    (ScheduleState.PAUSED, "deadline"): (ScheduleState.PAUSED, False),
    (ScheduleState.PAUSED, "pause"): ("error", False),
    (ScheduleState.PAUSED, "resume"): (ScheduleState.ACTIVE, False),
    (ScheduleState.PAUSED, "disarm"): (ScheduleState.DISARMED, False),
    (ScheduleState.TRIGGERED, "check_in"): (ScheduleState.ACTIVE, False),
    (ScheduleState.TRIGGERED, "deadline"): (ScheduleState.TRIGGERED, False),
    (ScheduleState.TRIGGERED, "pause"): ("error", False),
    (ScheduleState.TRIGGERED, "resume"): ("error", False),
    (ScheduleState.TRIGGERED, "disarm"): (ScheduleState.DISARMED, False),
    (ScheduleState.DISARMED, "check_in"): ("error", False),
    (ScheduleState.DISARMED, "deadline"): (ScheduleState.DISARMED, False),
    (ScheduleState.DISARMED, "pause"): ("error", False),
    (ScheduleState.DISARMED, "resume"): ("error", False),
    (ScheduleState.DISARMED, "disarm"): (ScheduleState.DISARMED, False),
}


def drive_to_state(env, user, target: ScheduleState):
    schedule = env.ping.create_schedule(user["user_id"], 3600)
    if target is ScheduleState.ACTIVE:
        return schedule
    if target is ScheduleState.PAUSED:
        return env.ping.pause_schedule(schedule.schedule_id)
    if target is ScheduleState.TRIGGERED:
        env.clock.advance(3601)
        env.ping.poll_deadlines()
        return env.ping.get_schedule(schedule.schedule_id)
    if target is ScheduleState.DISARMED:
        return env.ping.disarm_schedule(schedule.schedule_id)
    raise AssertionError(target)


@pytest.mark.parametrize("state", STATES, ids=lambda s: s.value)
@pytest.mark.parametrize("event", EVENTS)
def test_state_machine_is_total(env, state, event):
    """Exhaustive (state x event) enumeration against the documented table."""
    user = env.add_user()
    schedule = drive_to_state(env, user, state)
    alerts_before = len(missed_alerts(env, schedule.schedule_id))
    expected_state, fires_alert = TRANSITION_TABLE[(state, event)]

    def apply(event_name):
        if event_name == "check_in":
            env.ping.check_in(schedule.schedule_id)
        elif event_name == "deadline":
            env.clock.advance(4000)
            env.ping.poll_deadlines()
        elif event_name == "pause":
            env.ping.pause_schedule(schedule.schedule_id)
        elif event_name == "resume":
            env.ping.resume_schedule(schedule.schedule_id)
        elif event_name == "disarm":
            env.ping.disarm_schedule(schedule.schedule_id)

    if expected_state == "error":
        with pytest.raises(InvalidState):
            apply(event)
        assert env.ping.get_schedule(schedule.schedule_id).state is state
    else:
        apply(event)
        assert env.ping.get_schedule(schedule.schedule_id).state is expected_state
    alerts_after = len(missed_alerts(env, schedule.schedule_id))
    assert alerts_after - alerts_before == (1 if fires_alert else 0)


class TestSos:
    def test_sos_embeds_coordinates_in_body(self, env):
        user = env.add_user()
        location = GeoLocation(latitude=12.9716, longitude=77.5946, captured_at=env.clock.now())
        alert = env.ping.trigger_sos(SosRequest(user_id=user["user_id"], location=location, note="please call"))
        assert alert.kind is AlertKind.SOS
        assert "12.971600" in alert.message
        assert "77.594600" in alert.message
        assert "https://maps.google.com/?q=12.971600,77.594600" in alert.message
        assert "please call" in alert.message
        assert env.dispatcher.entries_for_alert(alert.alert_id)

    def test_sos_without_location_marks_unavailable(self, env):
        user = env.add_user()
        alert = env.ping.trigger_sos(SosRequest(user_id=user["user_id"]))
        assert "location unavailable" in alert.message
        assert "maps.google.com" not in alert.message

    def test_out_of_range_latitude_rejected(self, env):
        env.add_user()
        with pytest.raises(InvalidLocation):
            GeoLocation(latitude=95.0, longitude=10.0, captured_at=env.clock.now())

    def test_requires_contacts(self, env):
        user = env.add_user(n_contacts=0)
        with pytest.raises(NoEmergencyContacts):
            env.ping.trigger_sos(SosRequest(user_id=user["user_id"]))

    def test_note_size_capped(self, env):
        user = env.add_user()
        with pytest.raises(ValidationError):
            env.ping.trigger_sos(SosRequest(user_id=user["user_id"], note="x" * 501))

    def test_future_capture_time_rejected(self, env):
        user = env.add_user()
        future = GeoLocation.__new__(GeoLocation)  # bypass __post_init__ range check only
        object.__setattr__(future, "latitude", 1.0)
        object.__setattr__(future, "longitude", 1.0)
        object.__setattr__(future, "captured_at", env.clock.now().replace(year=2099))
        object.__setattr__(future, "accuracy_m", None)
        with pytest.raises(InvalidLocation):
            env.ping.trigger_sos(SosRequest(user_id=user["user_id"], location=future))

    def test_missed_checkin_reuses_last_reported_location(self, env):
        user = env.add_user()
        location = GeoLocation(latitude=1.5, longitude=2.5, captured_at=env.clock.now())
        env.ping.trigger_sos(SosRequest(user_id=user["user_id"], location=location))
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        env.clock.advance(3601)
        alerts = env.ping.poll_deadlines()
        assert "1.500000" in alerts[0].message and "2.500000" in alerts[0].message

    def test_sos_independent_of_schedule_state(self, env):
        user = env.add_user()
        schedule = env.ping.create_schedule(user["user_id"], 3600)
        env.ping.disarm_schedule(schedule.schedule_id)
        alert = env.ping.trigger_sos(SosRequest(user_id=user["user_id"]))
        assert alert.kind is AlertKind.SOS


class TestRaces:
    def test_randomized_interleavings_at_most_once(self, env):
        """Random sequences of advance/check_in/poll never double-fire a
        deadline, and an on-time check-in silences its deadline forever."""
        rng = random.Random(7)
        user = env.add_user(n_contacts=1)
        for round_no in range(300):
            schedule = env.ping.create_schedule(user["user_id"], 60)
            protected: set[str] = set()  # deadlines that had an on-time check-in
            for _ in range(rng.randint(1, 8)):
                action = rng.random()
                if action < 0.45:
                    env.clock.advance(rng.choice([10, 30, 59, 61, 90]))
                elif action < 0.75:
                    current = env.ping.get_schedule(schedule.schedule_id)
                    if current.state in (ScheduleState.ACTIVE, ScheduleState.TRIGGERED):
                        if (current.state is ScheduleState.ACTIVE
                                and env.clock.now() < current.next_deadline):
                            protected.add(rfc3339(current.next_deadline))
                        after = env.ping.check_in(schedule.schedule_id)
                        # a value-identical re-armed deadline is a new live
                        # window, not the protected one
                        protected.discard(rfc3339(after.next_deadline))
                else:
                    env.ping.poll_deadlines()
            alerts = missed_alerts(env, schedule.schedule_id)
            by_deadline = {}
            for alert in alerts:
                by_deadline[alert["deadline"]] = by_deadline.get(alert["deadline"], 0) + 1
            assert all(count == 1 for count in by_deadline.values()), round_no
            assert not (protected & set(by_deadline)), round_no
            env.ping.disarm_schedule(schedule.schedule_id)

    def test_threaded_checkin_vs_poll_single_alert(self):
        """True thread race on one schedule: at most one alert per deadline."""
        from safespace.alerts.dispatch import AlertDispatcher
        from safespace.clock import SimulatedClock
        from safespace.safety_ping import SafetyPingService
        from safespace.alerts.contacts import EmergencyContact, save_contacts

        for trial in range(25):
            store = MemoryStore()
            clock = SimulatedClock()
            dispatcher = AlertDispatcher(store, clock)
            ping = SafetyPingService(store, dispatcher, clock)
            store.put("users", "u1", {"user_id": "u1", "display_name": "U"})
            save_contacts(store, "u1", [EmergencyContact("c1", "u1", "C", "c@example.org", 1)])
            schedule = ping.create_schedule("u1", 60)
            clock.advance(61)
            barrier = threading.Barrier(2)

            def racer(fn):
                barrier.wait()
                fn()

            threads = [
                threading.Thread(target=racer, args=(lambda: ping.check_in(schedule.schedule_id),)),
                threading.Thread(target=racer, args=(ping.poll_deadlines,)),
            ]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
            alerts = store.list("alerts", {"kind": "MissedCheckIn", "schedule_id": schedule.schedule_id})
            assert len(alerts) == 1, trial
