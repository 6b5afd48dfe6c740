"""Operator and headless-user command line interface.

Exit codes: 0 success (or clean analysis), 3 abusive verdict, 2 usage or
input error, 1 runtime failure.
"""

from __future__ import annotations

import json
import socket
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from safespace.clock import parse_rfc3339, rfc3339
from safespace.errors import (
    IncompleteResponses,
    LexiconError,
    SafeSpaceError,
    ValidationError,
    VersionMismatch,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_INPUT = 2
EXIT_ABUSIVE = 3


def _fail(message: str, code: int) -> "SystemExit":
    click.echo(f"error: {message}", err=True)
    return SystemExit(code)


def _load_app_config(path: str | None):
    from safespace.service.config import AppConfig, load_config

    if path is None:
        return AppConfig()
    config_path = Path(path)
    if not config_path.is_file():
        raise _fail(f"config file not found: {path}", EXIT_INPUT)
    try:
        return load_config(config_path)
    except SafeSpaceError as exc:
        raise _fail(f"bad config: {exc}", EXIT_INPUT)


def _emit(payload: dict, output: str, human_lines: list[str]) -> None:
    if output == "json":
        click.echo(json.dumps(payload, sort_keys=True))
    else:
        for line in human_lines:
            click.echo(line)


@click.group()
def main():
    """SafeSpace: toxicity analysis, safety pings, and reflection tools."""


# --- serve -------------------------------------------------------------------

@main.command()
@click.option("--config", "config_path", required=True, help="Path to the service config file.")
def serve(config_path: str):
    """Run the HTTP service with the scheduler and dispatcher loops."""
    import uvicorn

    from safespace.service.app import create_app, create_state

    config = _load_app_config(config_path)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((config.listen_host, config.listen_port))
    except OSError as exc:
        raise _fail(f"cannot bind {config.listen_host}:{config.listen_port}: {exc}", EXIT_RUNTIME)
    finally:
        probe.close()

    app = create_app(create_state(config))
    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="info")


# --- analyze -----------------------------------------------------------------

@main.command()
@click.option("--text", "text", default=None, help="Text to analyze.")
@click.option("--image", "image_path", default=None, type=click.Path(), help="Screenshot to analyze.")
@click.option("--scorer", "scorer_mode", type=click.Choice(["lexicon", "remote"]), default="lexicon")
@click.option("--config", "config_path", default=None, help="Config file (remote scorer / extractor).")
@click.option("--output", type=click.Choice(["human", "json"]), default="human")
def analyze(text: str | None, image_path: str | None, scorer_mode: str, config_path: str | None, output: str):
    """Score text or a screenshot for toxicity. Exits 3 on an Abusive verdict."""
    from safespace.toxicity import (
        CommandExtractor,
        LexiconScorer,
        RemoteScorer,
        analyze_image,
        analyze_text,
        load_lexicon,
    )
    from safespace.toxicity.types import Verdict

    if (text is None) == (image_path is None):
        raise _fail("exactly one of --text or --image is required", EXIT_INPUT)
    config = _load_app_config(config_path)
    scorer_config = config.scorer
    scorer_config.mode = scorer_mode
    if scorer_mode == "remote":
        scorer = RemoteScorer(scorer_config)
    else:
        lexicon = load_lexicon(scorer_config.lexicon_path) if scorer_config.lexicon_path else None
        try:
            scorer = LexiconScorer(lexicon)
        except LexiconError as exc:
            raise _fail(f"lexicon: {exc}", EXIT_INPUT)

    try:
        if text is not None:
            report = analyze_text(text, scorer, scorer_config)
        else:
            path = Path(image_path)  # type: ignore[arg-type]
            if not path.is_file():
                raise _fail(f"cannot read image: {image_path}", EXIT_INPUT)
            if not config.extractor_command:
                raise _fail("no extractor_command configured for image analysis", EXIT_INPUT)
            report = analyze_image(path.read_bytes(), CommandExtractor(config.extractor_command),
                                   scorer, scorer_config)
    except SafeSpaceError as exc:
        code = EXIT_INPUT if exc.code in ("EmptyInput", "TextTooLong") else EXIT_RUNTIME
        raise _fail(f"{exc.code}: {exc}", code)

    payload = report.to_json()
    lines = [f"verdict: {report.verdict.value}  (scorer: {report.scorer_id}, source: {report.source.value})"]
    lines += [f"  {name}: {score:.3f}" for name, score in payload["scores"].items()]
    if report.spans:
        lines.append("flagged:")
        lines += [f"  [{s.category.value}] {s.matched!r}" for s in report.spans]
    _emit(payload, output, lines)
    if report.verdict is Verdict.ABUSIVE:
        raise SystemExit(EXIT_ABUSIVE)


# --- questionnaire -------------------------------------------------------------

@main.group()
def questionnaire():
    """Questionnaire tools."""


@questionnaire.command("score")
@click.option("--definition", "definition_path", default=None, type=click.Path(),
              help="Questionnaire definition JSON (default: bundled instrument).")
@click.option("--responses", "responses_path", required=True, type=click.Path())
@click.option("--output", type=click.Choice(["human", "json"]), default="human")
def questionnaire_score(definition_path: str | None, responses_path: str, output: str):
    """Score a response file against a questionnaire definition."""
    from safespace.questionnaire import ResponseSet, load_bundled_questionnaire, load_questionnaire, score_responses

    try:
        definition = load_questionnaire(definition_path) if definition_path else load_bundled_questionnaire()
    except SafeSpaceError as exc:
        raise _fail(f"definition: {exc}", EXIT_INPUT)
    responses_file = Path(responses_path)
    if not responses_file.is_file():
        raise _fail(f"responses file not found: {responses_path}", EXIT_INPUT)
    try:
        raw = json.loads(responses_file.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise _fail(f"responses: {exc}", EXIT_INPUT)
    responses = ResponseSet(
        questionnaire_id=raw.get("questionnaire_id", definition.questionnaire_id),
        version=int(raw.get("version", definition.version)),
        answers=raw.get("answers", {}),
    )
    try:
        assessment = score_responses(definition, responses)
    except (IncompleteResponses, VersionMismatch, ValidationError) as exc:
        raise _fail(f"{exc.code}: {exc}", EXIT_INPUT)
    payload = assessment.to_json()
    lines = [
        f"positivity: {assessment.positivity:.4f}",
        f"category: {assessment.category.value}",
        f"feedback: {assessment.feedback}",
    ] + [f"  {name}: {value:.4f}" for name, value in payload["dimensions"].items()]
    _emit(payload, output, lines)


# --- sim ------------------------------------------------------------------------

@main.group()
def sim():
    """Reliability simulation."""


@sim.command("run")
@click.option("--schedules", "schedules", type=int, required=True)
@click.option("--seed", type=int, default=0)
@click.option("--fail-rate", "fail_rate", type=float, default=0.0)
@click.option("--tick", "tick_s", type=float, default=5.0)
@click.option("--output", type=click.Choice(["human", "json"]), default="human")
def sim_run(schedules: int, seed: int, fail_rate: float, tick_s: float, output: str):
    """Simulate N schedules missing deadlines over a flaky transport."""
    from safespace.sim import SimConfig, run_simulation

    if schedules < 0:
        raise _fail("--schedules must be >= 0", EXIT_INPUT)
    if not (0.0 <= fail_rate < 1.0):
        raise _fail("--fail-rate must be in [0, 1)", EXIT_INPUT)
    report = run_simulation(SimConfig(schedules=schedules, seed=seed, fail_rate=fail_rate, tick_s=tick_s))
    payload = report.to_json()
    lines = [
        f"schedules: {report.schedules}   check-ins: {report.checkins_performed}",
        f"alerts: {report.alerts_created}/{report.expected_alerts} expected, {report.duplicate_alerts} duplicates",
        f"delivered: {report.delivered_alerts}/{report.expected_alerts}  ratio {report.delivered_ratio:.4f}",
        f"messages: {report.messages_sent}/{report.messages_expected} over {report.send_attempts} attempts "
        f"({report.transport_failures} simulated failures)",
        (
            f"latency s: min {report.latency_s.get('min', 0.0):.3f}  mean {report.latency_s.get('mean', 0.0):.3f}  "
            f"p95 {report.latency_s.get('p95', 0.0):.3f}  max {report.latency_s.get('max', 0.0):.3f} "
            f"(within tick: {report.max_latency_within_tick})"
        )
        if report.latency_s
        else "latency s: n/a",
    ]
    _emit(payload, output, lines)


# --- outbox -----------------------------------------------------------------------

@main.group()
def outbox():
    """Outbox maintenance."""


def _dispatcher_for(config):
    from safespace.alerts.dispatch import AlertDispatcher
    from safespace.clock import SystemClock
    from safespace.store import FileStore

    store = FileStore(config.data_dir)
    return store, AlertDispatcher(store, SystemClock(), sender=config.smtp.sender,
                                  max_attempts=config.max_send_attempts)


@outbox.command("flush")
@click.option("--config", "config_path", required=True)
@click.option("--output", type=click.Choice(["human", "json"]), default="human")
def outbox_flush(config_path: str, output: str):
    """Attempt every due outbox entry once."""
    from safespace.alerts.smtp import SmtpTransport

    config = _load_app_config(config_path)
    store, dispatcher = _dispatcher_for(config)
    summary = dispatcher.flush_outbox(SmtpTransport(config.smtp))
    pending = dispatcher.pending_count()
    store.close()
    payload = {**summary.to_json(), "pending": pending}
    _emit(payload, output, [
        f"attempted {summary.attempted}, sent {summary.sent}, retried {summary.retried}, "
        f"failed {summary.failed}; pending now {pending}"
    ])


@outbox.command("list")
@click.option("--config", "config_path", required=True)
@click.option("--output", type=click.Choice(["human", "json"]), default="human")
def outbox_list(config_path: str, output: str):
    """List outbox entries."""
    config = _load_app_config(config_path)
    store, dispatcher = _dispatcher_for(config)
    entries = sorted(store.list("outbox"), key=lambda e: (e["user_id"], e["priority"], e["recipient"]))
    store.close()
    if output == "json":
        for entry in entries:
            click.echo(json.dumps(entry, sort_keys=True))
    elif not entries:
        click.echo("outbox empty")
    else:
        for entry in entries:
            click.echo(
                f"{entry['status']:8} {entry['alert_id'][:12]} -> {entry['recipient']} "
                f"(attempts {entry['attempts']}, next {entry['next_attempt_at']})"
            )


# --- history ---------------------------------------------------------------------

@main.group()
def history():
    """History maintenance."""


@history.command("prune")
@click.option("--config", "config_path", required=True)
@click.option("--before", "before", required=True, help="Remove events older than this RFC 3339 timestamp or date.")
@click.option("--output", type=click.Choice(["human", "json"]), default="human")
def history_prune(config_path: str, before: str, output: str):
    """Delete history events older than a cutoff and compact the journal."""
    from safespace.store import FileStore

    config = _load_app_config(config_path)
    try:
        cutoff = parse_rfc3339(before) if "T" in before else datetime.fromisoformat(before).replace(tzinfo=timezone.utc)
    except ValueError:
        raise _fail(f"bad --before value: {before!r}", EXIT_INPUT)
    store = FileStore(config.data_dir)
    removed = 0
    for event in store.list("history"):
        if parse_rfc3339(event["occurred_at"]) < cutoff:
            store.delete("history", event["event_id"])
            removed += 1
    store.compact("history")
    store.close()
    _emit({"removed": removed, "before": rfc3339(cutoff)}, output, [f"removed {removed} event(s)"])


# --- user ------------------------------------------------------------------------

@main.group()
def user():
    """User provisioning."""


@user.command("create")
@click.option("--config", "config_path", required=True)
@click.option("--name", "display_name", required=True)
@click.option("--output", type=click.Choice(["human", "json"]), default="human")
def user_create(config_path: str, display_name: str, output: str):
    """Create a user and print its id and bearer token."""
    from safespace.service.users import create_user
    from safespace.store import FileStore

    config = _load_app_config(config_path)
    store = FileStore(config.data_dir)
    created = create_user(store, display_name)
    store.close()
    _emit(created, output, [f"user_id: {created['user_id']}", f"token: {created['token']}"])


if __name__ == "__main__":
    sys.exit(main())
