"""Client for the remote toxicity scorer (Perspective-compatible wire shape).

One POST per analysis:

    POST {endpoint}?key={credential}
    {"comment": {"text": ...}, "languages": ["en"],
     "requestedAttributes": {"TOXICITY": {}, ...}}

Scores are read from attributeScores.{ATTR}.summaryScore.value. Out-of-range
scores and malformed bodies are rejected, never clamped. The credential is
read from an environment variable at call time and never logged or stored.
"""

from __future__ import annotations

import json
import logging
import os
import threading

import requests

from safespace.errors import ProtocolError, ScorerUnavailable
from safespace.toxicity.types import (
    ALL_CATEGORIES,
    CategoryScores,
    ScoreResult,
    ScorerConfig,
    empty_scores,
)

logger = logging.getLogger(__name__)


def build_request_body(text: str) -> dict:
    return {
        "comment": {"text": text},
        "languages": ["en"],
        "requestedAttributes": {category.value: {} for category in ALL_CATEGORIES},
    }


def parse_remote_response(body: bytes | str) -> CategoryScores:
    """Parse an AnalyzeComment response body into CategoryScores.

    Missing attributes default to 0.0 with a warning; anything structurally
    wrong or out of [0,1] raises ProtocolError.
    """
    try:
        payload = json.loads(body)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProtocolError(f"response is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ProtocolError("response JSON is not an object")
    attribute_scores = payload.get("attributeScores", {})
    if not isinstance(attribute_scores, dict):
        raise ProtocolError("attributeScores is not an object")

    scores = empty_scores()
    for category in ALL_CATEGORIES:
        attr = attribute_scores.get(category.value)
        if attr is None:
            logger.warning("remote scorer response missing attribute %s; defaulting to 0.0", category.value)
            continue
        try:
            value = attr["summaryScore"]["value"]
        except (TypeError, KeyError) as exc:
            raise ProtocolError(f"attribute {category.value} missing summaryScore.value") from exc
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ProtocolError(f"attribute {category.value} score is not a number: {value!r}")
        value = float(value)
        if not (0.0 <= value <= 1.0):
            raise ProtocolError(f"attribute {category.value} score out of [0,1]: {value}")
        scores[category] = value
    return scores


def score_remote(text: str, config: ScorerConfig, session: requests.Session | None = None) -> CategoryScores:
    """Issue one scoring request and parse the result.

    Raises ScorerUnavailable on timeouts, connection failures and 5xx;
    ProtocolError on malformed or out-of-range responses.
    """
    if not config.remote_endpoint:
        raise ScorerUnavailable("remote scorer endpoint not configured")
    key = os.environ.get(config.remote_key_env, "")
    params = {"key": key} if key else {}
    post = (session or requests).post
    try:
        response = post(
            config.remote_endpoint,
            params=params,
            json=build_request_body(text),
            timeout=config.timeout_s,
        )
    except requests.Timeout as exc:
        raise ScorerUnavailable(f"remote scorer timed out after {config.timeout_s}s") from exc
    except requests.ConnectionError as exc:
        raise ScorerUnavailable("remote scorer unreachable") from exc
    except requests.RequestException as exc:
        raise ScorerUnavailable(f"remote scorer request failed: {exc}") from exc

    if response.status_code >= 500:
        raise ScorerUnavailable(f"remote scorer returned {response.status_code}")
    if response.status_code != 200:
        raise ProtocolError(f"remote scorer returned {response.status_code}")
    return parse_remote_response(response.content)


class RemoteScorer:
    """Scorer handle over the remote service with an in-flight request cap."""

    scorer_id = "remote"

    def __init__(self, config: ScorerConfig, session: requests.Session | None = None):
        self.config = config
        self.session = session or requests.Session()
        self._inflight = threading.Semaphore(config.max_inflight)

    def score(self, text: str) -> ScoreResult:
        with self._inflight:
            scores = score_remote(text, self.config, self.session)
        # Remote protocol returns no span data.
        return ScoreResult(scores=scores, spans=())
