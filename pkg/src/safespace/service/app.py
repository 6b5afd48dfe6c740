"""HTTP JSON API over all modules.

Every /api route requires a bearer token; errors use one stable shape:
{"error": {"code": <machine code>, "message": <human text>}}. Timestamps
are RFC 3339 UTC, fields snake_case. Request and response bodies carrying
chat text are never logged or persisted.
"""

from __future__ import annotations

import logging
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Depends, FastAPI, File, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from safespace.alerts.contacts import contacts_for_user, save_contacts, validate_contacts
from safespace.alerts.dispatch import AlertDispatcher
from safespace.alerts.smtp import MailTransport, SmtpTransport
from safespace.alerts.types import GeoLocation
from safespace.clock import Clock, SimulatedClock, SystemClock, parse_rfc3339
from safespace.errors import (
    EmptyInput,
    ExtractionFailed,
    NotFound,
    SafeSpaceError,
    TextTooLong,
    Unauthenticated,
    ValidationError,
)
from safespace.questionnaire import Questionnaire, ResponseSet, load_bundled_questionnaire, score_responses
from safespace.safety_ping import SafetyPingService, SosRequest
from safespace.service.config import AppConfig
from safespace.service.loops import BackgroundLoops, HealthState
from safespace.service.users import find_user_by_token
from safespace.store import EventKind, FileStore, HistoryEvent, MemoryStore
from safespace.toxicity.engine import Scorer, analyze_image, analyze_text
from safespace.toxicity.extraction import CommandExtractor, TextExtractor
from safespace.toxicity.lexicon import LexiconScorer, load_lexicon
from safespace.toxicity.remote import RemoteScorer

logger = logging.getLogger(__name__)

MAX_ANALYZE_BODY_BYTES = 32 * 1024

STATUS_BY_CODE = {
    "Unauthenticated": 401,
    "EmptyInput": 422,
    "TextTooLong": 422,
    "ScorerUnavailable": 503,
    "ProtocolError": 502,
    "ExtractionFailed": 502,
    "IntervalTooShort": 422,
    "NoEmergencyContacts": 422,
    "InvalidLocation": 422,
    "InvalidState": 409,
    "NotFound": 404,
    "VersionConflict": 409,
    "ValidationError": 422,
    "IncompleteResponses": 422,
    "VersionMismatch": 422,
    "InvalidContact": 422,
    "StorageUnavailable": 503,
    "InvalidRequest": 422,
    "LexiconError": 500,
    "ParseError": 500,
    "DuplicatePhrase": 500,
    "WeightOutOfRange": 500,
}


@dataclass
class AppState:
    config: AppConfig
    store: object
    clock: Clock
    dispatcher: AlertDispatcher
    ping: SafetyPingService
    scorer: Scorer
    extractor: TextExtractor | None
    transport: MailTransport
    health: HealthState
    questionnaires: dict[str, Questionnaire] = field(default_factory=dict)
    loops: BackgroundLoops | None = None


def create_state(
    config: AppConfig,
    store=None,
    clock: Clock | None = None,
    transport: MailTransport | None = None,
    extractor: TextExtractor | None = None,
    scorer: Scorer | None = None,
) -> AppState:
    if store is None:
        store = MemoryStore() if config.data_dir == ":memory:" else FileStore(config.data_dir)
    if clock is None:
        clock = SimulatedClock() if config.clock == "simulated" else SystemClock()
    dispatcher = AlertDispatcher(store, clock, sender=config.smtp.sender, max_attempts=config.max_send_attempts)
    ping = SafetyPingService(store, dispatcher, clock)
    if scorer is None:
        if config.scorer.mode == "remote":
            scorer = RemoteScorer(config.scorer)
        else:
            lexicon = load_lexicon(config.scorer.lexicon_path) if config.scorer.lexicon_path else None
            scorer = LexiconScorer(lexicon)
    if extractor is None and config.extractor_command:
        extractor = CommandExtractor(config.extractor_command)
    bundled = load_bundled_questionnaire()
    return AppState(
        config=config,
        store=store,
        clock=clock,
        dispatcher=dispatcher,
        ping=ping,
        scorer=scorer,
        extractor=extractor,
        transport=transport or SmtpTransport(config.smtp),
        health=HealthState(tick_seconds=config.tick_seconds),
        questionnaires={bundled.questionnaire_id: bundled},
    )


def _error_response(code: str, message: str) -> JSONResponse:
    status = STATUS_BY_CODE.get(code, 500)
    headers = {"Retry-After": "5"} if code in ("ScorerUnavailable", "StorageUnavailable") else None
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}}, headers=headers)


def create_app(state: AppState) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if state.config.start_loops:
            state.loops = BackgroundLoops(
                scheduler_tick=lambda: state.ping.poll_deadlines(),
                dispatcher_tick=lambda: state.dispatcher.flush_outbox(state.transport),
                tick_seconds=state.config.tick_seconds,
                health=state.health,
            )
            state.loops.start()
        try:
            yield
        finally:
            if state.loops is not None:
                state.loops.stop()
            close = getattr(state.store, "close", None)
            if close:
                close()

    app = FastAPI(title="SafeSpace", lifespan=lifespan)
    app.state.safespace = state

    @app.exception_handler(SafeSpaceError)
    async def handle_domain_error(request: Request, exc: SafeSpaceError):
        return _error_response(exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return _error_response("InvalidRequest", "request body does not match the documented schema")

    async def current_user(request: Request) -> dict:
        header = request.headers.get("authorization", "")
        token = header[7:] if header.lower().startswith("bearer ") else ""
        user = find_user_by_token(state.store, token)
        if user is None:
            # One generic message: never reveals whether a user exists.
            raise Unauthenticated("missing or invalid bearer token")
        return user

    # --- toxicity ---------------------------------------------------------

    def _record_analysis(user: dict, report) -> None:
        peak = max(report.scores.values())
        state.store.append_history(
            HistoryEvent(
                event_id=uuid.uuid4().hex,
                user_id=user["user_id"],
                kind=EventKind.ANALYSIS_PERFORMED,
                summary=(
                    f"analysis: verdict={report.verdict.value}; max={peak:.3f}; "
                    f"source={report.source.value}; scorer={report.scorer_id}"
                ),
                occurred_at=state.clock.now(),
            )
        )

    @app.post("/api/analyze/text")
    async def analyze_text_endpoint(request: Request, user: dict = Depends(current_user)):
        body = await request.body()
        if len(body) > MAX_ANALYZE_BODY_BYTES:
            raise TextTooLong(f"request body exceeds {MAX_ANALYZE_BODY_BYTES} bytes")
        payload = _json_object(body)
        text = payload.get("text")
        if not isinstance(text, str) or not text.strip():
            raise EmptyInput("field 'text' must be a non-empty string")
        report = analyze_text(text, state.scorer, state.config.scorer, clock=state.clock)
        _record_analysis(user, report)
        return report.to_json()

    @app.post("/api/analyze/image")
    async def analyze_image_endpoint(image: UploadFile = File(...), user: dict = Depends(current_user)):
        data = await image.read()
        if state.extractor is None:
            raise ExtractionFailed("no text extractor configured")
        report = analyze_image(data, state.extractor, state.scorer, state.config.scorer, clock=state.clock)
        _record_analysis(user, report)
        return report.to_json()

    # --- schedules ----------------------------------------------------------

    def _owned_schedule(schedule_id: str, user: dict):
        schedule = state.ping.get_schedule(schedule_id)
        if schedule.user_id != user["user_id"]:
            raise NotFound(f"schedules/{schedule_id}")
        return schedule

    @app.post("/api/schedules", status_code=201)
    async def create_schedule(request: Request, user: dict = Depends(current_user)):
        payload = _json_object(await request.body())
        interval = payload.get("interval_seconds")
        if not isinstance(interval, int) or isinstance(interval, bool):
            raise ValidationError("field 'interval_seconds' must be an integer")
        return state.ping.create_schedule(user["user_id"], interval).to_json()

    @app.get("/api/schedules")
    async def list_schedules(user: dict = Depends(current_user)):
        return {"schedules": [s.to_json() for s in state.ping.list_schedules(user["user_id"])]}

    @app.post("/api/schedules/{schedule_id}/checkin")
    async def check_in(schedule_id: str, user: dict = Depends(current_user)):
        _owned_schedule(schedule_id, user)
        return state.ping.check_in(schedule_id).to_json()

    @app.post("/api/schedules/{schedule_id}/pause")
    async def pause(schedule_id: str, user: dict = Depends(current_user)):
        _owned_schedule(schedule_id, user)
        return state.ping.pause_schedule(schedule_id).to_json()

    @app.post("/api/schedules/{schedule_id}/resume")
    async def resume(schedule_id: str, user: dict = Depends(current_user)):
        _owned_schedule(schedule_id, user)
        return state.ping.resume_schedule(schedule_id).to_json()

    @app.post("/api/schedules/{schedule_id}/disarm")
    async def disarm(schedule_id: str, user: dict = Depends(current_user)):
        _owned_schedule(schedule_id, user)
        return state.ping.disarm_schedule(schedule_id).to_json()

    # --- SOS -----------------------------------------------------------------

    @app.post("/api/sos", status_code=201)
    async def sos(request: Request, user: dict = Depends(current_user)):
        payload = _json_object(await request.body())
        location = None
        if payload.get("lat") is not None or payload.get("lon") is not None:
            lat, lon = payload.get("lat"), payload.get("lon")
            if not isinstance(lat, (int, float)) or not isinstance(lon, (int, float)):
                raise ValidationError("both 'lat' and 'lon' are required when sending a location")
            location = GeoLocation(
                latitude=float(lat),
                longitude=float(lon),
                captured_at=state.clock.now(),
                accuracy_m=payload.get("accuracy_m"),
            )
        alert = state.ping.trigger_sos(
            SosRequest(user_id=user["user_id"], location=location, note=payload.get("note"))
        )
        return alert.to_json()

    # --- contacts --------------------------------------------------------------

    @app.put("/api/contacts")
    async def put_contacts(request: Request, user: dict = Depends(current_user)):
        payload = _json_object(await request.body())
        raw = payload.get("contacts")
        if not isinstance(raw, list):
            raise ValidationError("field 'contacts' must be a list")
        contacts = validate_contacts(user["user_id"], raw)
        save_contacts(state.store, user["user_id"], contacts)
        return {"contacts": [c.to_json() for c in contacts]}

    @app.get("/api/contacts")
    async def get_contacts(user: dict = Depends(current_user)):
        return {"contacts": [c.to_json() for c in contacts_for_user(state.store, user["user_id"])]}

    # --- questionnaire -----------------------------------------------------------

    @app.get("/api/questionnaire/{questionnaire_id}")
    async def get_questionnaire(questionnaire_id: str, user: dict = Depends(current_user)):
        questionnaire = state.questionnaires.get(questionnaire_id)
        if questionnaire is None:
            raise NotFound(f"questionnaire/{questionnaire_id}")
        return questionnaire.to_json()

    @app.post("/api/questionnaire/{questionnaire_id}/submit")
    async def submit_questionnaire(questionnaire_id: str, request: Request, user: dict = Depends(current_user)):
        questionnaire = state.questionnaires.get(questionnaire_id)
        if questionnaire is None:
            raise NotFound(f"questionnaire/{questionnaire_id}")
        payload = _json_object(await request.body())
        answers = payload.get("answers")
        if not isinstance(answers, dict):
            raise ValidationError("field 'answers' must be an object of question_id -> option index")
        responses = ResponseSet(
            questionnaire_id=questionnaire_id,
            version=int(payload.get("version", questionnaire.version)),
            answers=answers,
            submitted_at=state.clock.now(),
        )
        assessment = score_responses(questionnaire, responses, clock=state.clock)
        # Persist outcome only: P, category, dimension scores. Never answers.
        state.store.put(
            "assessments",
            uuid.uuid4().hex,
            {
                "user_id": user["user_id"],
                "questionnaire_id": questionnaire_id,
                "version": questionnaire.version,
                **assessment.to_json(),
            },
        )
        state.store.append_history(
            HistoryEvent(
                event_id=uuid.uuid4().hex,
                user_id=user["user_id"],
                kind=EventKind.QUESTIONNAIRE_SCORED,
                summary=f"questionnaire {questionnaire_id}: {assessment.category.value} (P={assessment.positivity:.2f})",
                occurred_at=state.clock.now(),
            )
        )
        return assessment.to_json()

    # --- history -------------------------------------------------------------------

    @app.get("/api/history")
    async def history(
        since: str | None = None,
        kind: str | None = None,
        limit: int = 100,
        offset: int = 0,
        user: dict = Depends(current_user),
    ):
        events = state.store.list("history", {"user_id": user["user_id"]})
        if kind is not None:
            try:
                EventKind(kind)
            except ValueError:
                raise ValidationError(f"unknown history kind {kind!r}") from None
            events = [e for e in events if e["kind"] == kind]
        if since is not None:
            try:
                cutoff = parse_rfc3339(since)
            except ValueError:
                raise ValidationError("'since' must be an RFC 3339 timestamp") from None
            events = [e for e in events if parse_rfc3339(e["occurred_at"]) >= cutoff]
        events.sort(key=lambda e: e["occurred_at"], reverse=True)
        return {"events": events[offset : offset + max(0, limit)], "total": len(events)}

    # --- health ----------------------------------------------------------------------

    @app.get("/healthz")
    async def healthz():
        return {
            "status": state.health.status(),
            "scheduler_tick_age_s": round(state.health.scheduler_tick_age_s(), 3),
            "outbox_pending": state.dispatcher.pending_count(),
        }

    _maybe_mount_static(app, state)
    return app


def _json_object(body: bytes) -> dict:
    import json

    try:
        payload = json.loads(body or b"{}")
    except json.JSONDecodeError:
        raise ValidationError("request body must be a JSON object") from None
    if not isinstance(payload, dict):
        raise ValidationError("request body must be a JSON object")
    return payload


def _maybe_mount_static(app: FastAPI, state: AppState) -> None:
    static_dir = getattr(state.config, "static_dir", "")
    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
