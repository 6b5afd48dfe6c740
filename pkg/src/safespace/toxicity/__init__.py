from safespace.toxicity.engine import analyze_image, analyze_text, classify
from safespace.toxicity.extraction import CommandExtractor, StubExtractor, TextExtractor
from safespace.toxicity.lexicon import Lexicon, LexiconScorer, load_lexicon, score_lexicon
from safespace.toxicity.remote import RemoteScorer, parse_remote_response, score_remote
from safespace.toxicity.types import (
    CategoryScores,
    FlaggedSpan,
    ScorerConfig,
    TextSource,
    ToxicityCategory,
    ToxicityReport,
    Verdict,
)

__all__ = [
    "CategoryScores",
    "CommandExtractor",
    "FlaggedSpan",
    "Lexicon",
    "LexiconScorer",
    "RemoteScorer",
    "ScorerConfig",
    "StubExtractor",
    "TextExtractor",
    "TextSource",
    "ToxicityCategory",
    "ToxicityReport",
    "Verdict",
    "analyze_image",
    "analyze_text",
    "classify",
    "load_lexicon",
    "parse_remote_response",
    "score_lexicon",
    "score_remote",
]
