"""Offline keyword/phrase scorer.

Deterministic stand-in for the remote scorer so the whole pipeline runs
without network access. Matching is case-insensitive and punctuation
insensitive: the text is tokenized into word runs and lexicon phrases are
matched longest-first, left to right, without overlap. Per category the
matched entry weights are folded with noisy-or: score = 1 - prod(1 - w).

Lexicon file format (UTF-8 TSV, one entry per line):

    phrase<TAB>CATEGORY:weight[,CATEGORY:weight...]

Lines starting with '#' and blank lines are ignored. Weights are decimals
in (0, 1]. Duplicate phrases (after normalization) are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from safespace.errors import DuplicatePhrase, ParseError, WeightOutOfRange
from safespace.toxicity.types import (
    CategoryScores,
    FlaggedSpan,
    ScoreResult,
    ToxicityCategory,
    empty_scores,
)

# Word runs; internal apostrophes (straight or typographic) stay inside a token
# so "you're" is one token.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*", re.UNICODE)


def _normalize(token: str) -> str:
    return token.casefold().replace("’", "'")


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """Return (normalized token, char start, char end) triples."""
    return [(_normalize(m.group()), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


@dataclass(frozen=True)
class LexiconEntry:
    phrase: str
    tokens: tuple[str, ...]
    weights: dict[ToxicityCategory, float]

    @property
    def span_category(self) -> ToxicityCategory:
        # Highest weight wins; ties resolve in category declaration order.
        return max(self.weights, key=lambda c: (self.weights[c], -list(ToxicityCategory).index(c)))


@dataclass(frozen=True)
class Lexicon:
    entries: dict[tuple[str, ...], LexiconEntry]
    max_tokens: int

    def __len__(self) -> int:
        return len(self.entries)


def _parse_weights(spec: str, line_no: int) -> dict[ToxicityCategory, float]:
    weights: dict[ToxicityCategory, float] = {}
    for part in spec.split(","):
        part = part.strip()
        if ":" not in part:
            raise ParseError(f"line {line_no}: expected CATEGORY:weight, got {part!r}")
        name, _, raw = part.partition(":")
        try:
            category = ToxicityCategory(name.strip())
        except ValueError:
            raise ParseError(f"line {line_no}: unknown category {name.strip()!r}") from None
        try:
            weight = float(raw)
        except ValueError:
            raise ParseError(f"line {line_no}: bad weight {raw!r}") from None
        if not (0.0 < weight <= 1.0):
            raise WeightOutOfRange(f"line {line_no}: weight {weight} outside (0, 1]")
        if category in weights:
            raise ParseError(f"line {line_no}: category {category.value} repeated")
        weights[category] = weight
    if not weights:
        raise ParseError(f"line {line_no}: no category weights")
    return weights


def load_lexicon(path: str | Path) -> Lexicon:
    """Load and validate a lexicon TSV file."""
    entries: dict[tuple[str, ...], LexiconEntry] = {}
    max_tokens = 0
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "\t" not in stripped:
            raise ParseError(f"line {line_no}: expected phrase<TAB>weights")
        phrase, _, weight_spec = stripped.partition("\t")
        phrase = phrase.strip()
        key = tuple(tok for tok, _, _ in tokenize(phrase))
        if not key:
            raise ParseError(f"line {line_no}: phrase has no word tokens: {phrase!r}")
        if key in entries:
            raise DuplicatePhrase(f"line {line_no}: duplicate phrase {phrase!r}")
        weights = _parse_weights(weight_spec, line_no)
        entries[key] = LexiconEntry(phrase=phrase, tokens=key, weights=weights)
        max_tokens = max(max_tokens, len(key))
    return Lexicon(entries=entries, max_tokens=max_tokens)


def bundled_lexicon_path() -> Path:
    return Path(resources.files("safespace.toxicity").joinpath("data/en.tsv"))  # type: ignore[arg-type]


def load_bundled_lexicon() -> Lexicon:
    return load_lexicon(bundled_lexicon_path())


def _byte_offsets(text: str) -> list[int]:
    # offsets[i] = UTF-8 byte offset of char i; offsets[len(text)] = total bytes
    offsets = [0]
    total = 0
    for ch in text:
        total += len(ch.encode("utf-8"))
        offsets.append(total)
    return offsets


def score_lexicon(text: str, lexicon: Lexicon) -> tuple[CategoryScores, list[FlaggedSpan]]:
    """Score text against a lexicon. Pure: same inputs give identical output."""
    tokens = tokenize(text)
    matches: list[tuple[LexiconEntry, int, int]] = []  # (entry, char start, char end)
    i = 0
    n = len(tokens)
    while i < n:
        matched = False
        for length in range(min(lexicon.max_tokens, n - i), 0, -1):
            key = tuple(tok for tok, _, _ in tokens[i : i + length])
            entry = lexicon.entries.get(key)
            if entry is not None:
                matches.append((entry, tokens[i][1], tokens[i + length - 1][2]))
                i += length
                matched = True
                break
        if not matched:
            i += 1

    survival = {c: 1.0 for c in ToxicityCategory}
    for entry, _, _ in matches:
        for category, weight in entry.weights.items():
            survival[category] *= 1.0 - weight
    scores = empty_scores()
    for category in scores:
        scores[category] = 1.0 - survival[category]

    offsets = _byte_offsets(text)
    spans = [
        FlaggedSpan(
            start=offsets[cs],
            length=offsets[ce] - offsets[cs],
            category=entry.span_category,
            matched=text[cs:ce],
        )
        for entry, cs, ce in matches
    ]
    return scores, spans


class LexiconScorer:
    """Scorer-handle adapter over a loaded lexicon."""

    scorer_id = "lexicon"

    def __init__(self, lexicon: Lexicon | None = None):
        self.lexicon = lexicon or load_bundled_lexicon()

    def score(self, text: str) -> ScoreResult:
        scores, spans = score_lexicon(text, self.lexicon)
        return ScoreResult(scores=scores, spans=tuple(spans))
