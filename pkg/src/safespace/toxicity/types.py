"""Domain types for toxicity analysis."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from safespace.clock import rfc3339


class ToxicityCategory(Enum):
    TOXICITY = "TOXICITY"
    SEVERE_TOXICITY = "SEVERE_TOXICITY"
    INSULT = "INSULT"
    THREAT = "THREAT"
    IDENTITY_ATTACK = "IDENTITY_ATTACK"
    PROFANITY = "PROFANITY"


ALL_CATEGORIES: tuple[ToxicityCategory, ...] = tuple(ToxicityCategory)

# Mapping from category to [0,1] score. Helpers below enforce that every
# category is present exactly once and every score is in range.
CategoryScores = dict[ToxicityCategory, float]


def empty_scores() -> CategoryScores:
    return {c: 0.0 for c in ALL_CATEGORIES}


def validate_scores(scores: CategoryScores) -> CategoryScores:
    if set(scores) != set(ALL_CATEGORIES):
        missing = [c.value for c in ALL_CATEGORIES if c not in scores]
        extra = [getattr(c, "value", str(c)) for c in scores if c not in ALL_CATEGORIES]
        raise ValueError(f"category scores must cover all categories (missing={missing}, extra={extra})")
    for category, score in scores.items():
        if not (0.0 <= score <= 1.0):
            raise ValueError(f"score for {category.value} out of [0,1]: {score}")
    return scores


def scores_to_json(scores: CategoryScores) -> dict[str, float]:
    return {c.value: scores[c] for c in ALL_CATEGORIES}


class Verdict(Enum):
    CLEAN = "Clean"
    CAUTION = "Caution"
    ABUSIVE = "Abusive"


class TextSource(Enum):
    DIRECT_TEXT = "DirectText"
    SCREENSHOT = "Screenshot"


@dataclass(frozen=True)
class FlaggedSpan:
    """One offending region of the analyzed text.

    Offsets are byte positions into the UTF-8 encoding of the analyzed text;
    ``matched`` always equals the decoded slice at [start, start+length).
    """

    start: int
    length: int
    category: ToxicityCategory
    matched: str

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "length": self.length,
            "category": self.category.value,
            "matched": self.matched,
        }


@dataclass(frozen=True)
class ToxicityReport:
    scores: CategoryScores
    spans: tuple[FlaggedSpan, ...]
    verdict: Verdict
    source: TextSource
    analyzed_at: datetime
    scorer_id: str

    def to_json(self) -> dict:
        return {
            "scores": scores_to_json(self.scores),
            "spans": [s.to_json() for s in self.spans],
            "verdict": self.verdict.value,
            "source": self.source.value,
            "analyzed_at": rfc3339(self.analyzed_at),
            "scorer_id": self.scorer_id,
        }


DEFAULT_MAX_TEXT_BYTES = 20_000


@dataclass
class ScorerConfig:
    """Scoring configuration. ``remote_key_env`` names an environment variable;
    the secret itself is never stored here."""

    mode: str = "lexicon"  # "lexicon" | "remote"
    remote_endpoint: str = ""
    remote_key_env: str = "SAFESPACE_PERSPECTIVE_KEY"
    timeout_s: float = 10.0
    abusive_threshold: float = 0.8
    caution_threshold: float = 0.5
    max_text_bytes: int = DEFAULT_MAX_TEXT_BYTES
    max_inflight: int = 8
    lexicon_path: str = ""  # empty means the bundled lexicon

    def __post_init__(self):
        if not (0.0 <= self.caution_threshold <= self.abusive_threshold <= 1.0):
            raise ValueError(
                "thresholds must satisfy 0 <= caution <= abusive <= 1, got "
                f"caution={self.caution_threshold} abusive={self.abusive_threshold}"
            )
        if self.mode not in ("lexicon", "remote"):
            raise ValueError(f"unknown scorer mode: {self.mode}")


@dataclass(frozen=True)
class ScoreResult:
    """What a scorer hands back: scores plus any spans it can identify."""

    scores: CategoryScores
    spans: tuple[FlaggedSpan, ...] = field(default_factory=tuple)
