"""Toxicity analysis pipeline: validate input, score, classify, report.

Chat text and extracted screenshot text flow through the same path; neither
is ever handed to persistent storage from here (the store's transience audit
enforces this end to end).
"""

from __future__ import annotations

from typing import Protocol

from safespace.clock import Clock, SystemClock
from safespace.errors import EmptyInput, ExtractionFailed, TextTooLong
from safespace.toxicity.extraction import TextExtractor
from safespace.toxicity.types import (
    CategoryScores,
    ScoreResult,
    ScorerConfig,
    TextSource,
    ToxicityReport,
    Verdict,
    validate_scores,
)


class Scorer(Protocol):
    scorer_id: str

    def score(self, text: str) -> ScoreResult: ...


def classify(scores: CategoryScores, config: ScorerConfig) -> Verdict:
    """Verdict from the max category score. Pure and deterministic:
    Abusive at >= abusive_threshold, Caution at >= caution_threshold."""
    peak = max(scores.values())
    if peak >= config.abusive_threshold:
        return Verdict.ABUSIVE
    if peak >= config.caution_threshold:
        return Verdict.CAUTION
    return Verdict.CLEAN


def analyze_text(
    text: str,
    scorer: Scorer,
    config: ScorerConfig,
    clock: Clock | None = None,
    source: TextSource = TextSource.DIRECT_TEXT,
) -> ToxicityReport:
    if not text.strip():
        raise EmptyInput("text is blank")
    size = len(text.encode("utf-8"))
    if size > config.max_text_bytes:
        raise TextTooLong(f"text is {size} bytes; limit {config.max_text_bytes}")
    result = scorer.score(text)
    validate_scores(result.scores)
    return ToxicityReport(
        scores=result.scores,
        spans=result.spans,
        verdict=classify(result.scores, config),
        source=source,
        analyzed_at=(clock or SystemClock()).now(),
        scorer_id=scorer.scorer_id,
    )


def analyze_image(
    image: bytes,
    extractor: TextExtractor,
    scorer: Scorer,
    config: ScorerConfig,
    clock: Clock | None = None,
) -> ToxicityReport:
    if not image:
        raise ExtractionFailed("image is empty")
    text = extractor.extract(image)
    if not text.strip():
        raise ExtractionFailed("extractor produced no text")
    return analyze_text(text, scorer, config, clock=clock, source=TextSource.SCREENSHOT)
