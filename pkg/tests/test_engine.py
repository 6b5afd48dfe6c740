import pytest
from hypothesis import given, strategies as st

from safespace.clock import SimulatedClock
from safespace.errors import EmptyInput, ExtractionFailed, TextTooLong
from safespace.toxicity.engine import analyze_image, analyze_text, classify
from safespace.toxicity.extraction import CommandExtractor, StubExtractor
from safespace.toxicity.lexicon import LexiconScorer
from safespace.toxicity.types import (
    ScorerConfig,
    TextSource,
    ToxicityCategory,
    Verdict,
    empty_scores,
)

ABUSIVE_TEXT = "You're such a loser. I hate you."
CONFIG = ScorerConfig()


@pytest.fixture(scope="module")
def scorer():
    return LexiconScorer()


class TestClassify:
    def test_all_zero_is_clean(self):
        assert classify(empty_scores(), CONFIG) is Verdict.CLEAN

    def test_high_score_is_abusive(self):
        scores = empty_scores()
        scores[ToxicityCategory.TOXICITY] = 0.92
        assert classify(scores, CONFIG) is Verdict.ABUSIVE

    def test_caution_boundary_is_inclusive(self):
        scores = empty_scores()
        scores[ToxicityCategory.INSULT] = 0.5
        assert classify(scores, CONFIG) is Verdict.CAUTION

    def test_abusive_boundary_is_inclusive(self):
        scores = empty_scores()
        scores[ToxicityCategory.INSULT] = 0.8
        assert classify(scores, CONFIG) is Verdict.ABUSIVE

    def test_just_below_caution_is_clean(self):
        scores = empty_scores()
        scores[ToxicityCategory.THREAT] = 0.4999
        assert classify(scores, CONFIG) is Verdict.CLEAN

    def test_custom_thresholds(self):
        config = ScorerConfig(caution_threshold=0.2, abusive_threshold=0.3)
        scores = empty_scores()
        scores[ToxicityCategory.PROFANITY] = 0.25
        assert classify(scores, config) is Verdict.CAUTION

    def test_threshold_ordering_enforced(self):
        with pytest.raises(ValueError):
            ScorerConfig(caution_threshold=0.9, abusive_threshold=0.3)

    @given(
        st.dictionaries(
            st.sampled_from(list(ToxicityCategory)),
            st.floats(min_value=0.0, max_value=1.0),
            min_size=6,
            max_size=6,
        ),
        st.sampled_from(list(ToxicityCategory)),
        st.floats(min_value=0.0, max_value=1.0),
    )
    def test_raising_one_score_never_softens_verdict(self, scores, category, bump):
        order = [Verdict.CLEAN, Verdict.CAUTION, Verdict.ABUSIVE]
        before = classify(scores, CONFIG)
        raised = dict(scores)
        raised[category] = min(1.0, raised[category] + bump)
        after = classify(raised, CONFIG)
        assert order.index(after) >= order.index(before)


class TestAnalyzeText:
    def test_paper_example_is_abusive_with_spans(self, scorer):
        report = analyze_text(ABUSIVE_TEXT, scorer, CONFIG)
        assert report.verdict is Verdict.ABUSIVE
        assert report.scores[ToxicityCategory.TOXICITY] > 0.8
        assert report.scores[ToxicityCategory.INSULT] >= 0.8
        assert {s.matched for s in report.spans} == {"loser", "hate you"}
        assert report.source is TextSource.DIRECT_TEXT
        assert report.scorer_id == "lexicon"

    def test_clean_text_scores_zero(self, scorer):
        report = analyze_text("See you at lunch tomorrow!", scorer, CONFIG)
        assert report.verdict is Verdict.CLEAN
        assert all(v == 0.0 for v in report.scores.values())
        assert report.spans == ()

    def test_single_term_reduces_to_its_weight(self, scorer):
        report = analyze_text("you absolute idiot", scorer, CONFIG)
        assert report.scores[ToxicityCategory.INSULT] == 0.80
        assert report.scores[ToxicityCategory.TOXICITY] == 0.60
        assert report.verdict is Verdict.ABUSIVE

    def test_blank_input_rejected(self, scorer):
        with pytest.raises(EmptyInput):
            analyze_text("   \n\t ", scorer, CONFIG)

    def test_oversize_input_rejected(self, scorer):
        with pytest.raises(TextTooLong):
            analyze_text("x" * (CONFIG.max_text_bytes + 1), scorer, CONFIG)

    def test_classify_reproduces_stored_verdict(self, scorer):
        report = analyze_text(ABUSIVE_TEXT, scorer, CONFIG)
        assert classify(report.scores, CONFIG) is report.verdict

    def test_uses_injected_clock(self, scorer):
        clock = SimulatedClock()
        report = analyze_text("hello there", scorer, CONFIG, clock=clock)
        assert report.analyzed_at == clock.now()


class TestAnalyzeImage:
    def test_stub_extractor_matches_text_path(self, scorer):
        clock = SimulatedClock()
        direct = analyze_text(ABUSIVE_TEXT, scorer, CONFIG, clock=clock)
        via_image = analyze_image(b"fake-png-bytes", StubExtractor(ABUSIVE_TEXT), scorer, CONFIG, clock=clock)
        assert via_image.source is TextSource.SCREENSHOT
        assert via_image.scores == direct.scores
        assert via_image.spans == direct.spans
        assert via_image.verdict == direct.verdict

    def test_empty_extraction_fails(self, scorer):
        with pytest.raises(ExtractionFailed):
            analyze_image(b"bytes", StubExtractor(""), scorer, CONFIG)

    def test_zero_byte_image_fails_before_extractor(self, scorer):
        calls = []

        class Recording:
            def extract(self, image):
                calls.append(image)
                return "text"

        with pytest.raises(ExtractionFailed):
            analyze_image(b"", Recording(), scorer, CONFIG)
        assert calls == []

    def test_command_extractor_pipes_stdin_to_stdout(self, scorer):
        report = analyze_image(ABUSIVE_TEXT.encode("utf-8"), CommandExtractor(["cat"]), scorer, CONFIG)
        assert report.verdict is Verdict.ABUSIVE
        assert report.source is TextSource.SCREENSHOT

    def test_command_extractor_nonzero_exit_fails(self, scorer):
        with pytest.raises(ExtractionFailed):
            analyze_image(b"bytes", CommandExtractor(["false"]), scorer, CONFIG)

    def test_command_extractor_missing_binary_fails(self, scorer):
        with pytest.raises(ExtractionFailed):
            analyze_image(b"bytes", CommandExtractor(["/no/such/binary"]), scorer, CONFIG)
