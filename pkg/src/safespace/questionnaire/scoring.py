"""Weighted scoring of questionnaire responses.

Positivity P is the weighted mean of effective per-question scores (reverse
items flipped s -> 1-s). The category decision table is configurable; with
the defaults a ~0.6 positivity lands in the caution band.
"""

from __future__ import annotations

from dataclasses import dataclass

from safespace.clock import Clock, SystemClock
from safespace.errors import IncompleteResponses, ValidationError, VersionMismatch
from safespace.questionnaire.model import Assessment, Category, Dimension, Questionnaire, ResponseSet

DEFAULT_FEEDBACK = {
    Category.HEALTHY: "Your responses suggest a healthy dynamic. Keep nurturing open communication and mutual trust.",
    Category.NEEDS_REFLECTION: "Caution – signs of concern. Please reflect.",
    Category.UNHEALTHY: "Your responses point to serious concerns. Consider reaching out to someone you trust or a professional for support.",
}


@dataclass(frozen=True)
class ScoringBands:
    """Category boundaries: Healthy at P >= healthy_min, Unhealthy below reflect_min."""

    healthy_min: float = 0.70
    reflect_min: float = 0.40

    def __post_init__(self):
        if not (0.0 <= self.reflect_min <= self.healthy_min <= 1.0):
            raise ValueError("bands must satisfy 0 <= reflect_min <= healthy_min <= 1")


def categorize(
    positivity: float,
    bands: ScoringBands = ScoringBands(),
    feedback: dict[Category, str] | None = None,
) -> tuple[Category, str]:
    if not (0.0 <= positivity <= 1.0):
        raise ValueError(f"positivity {positivity} outside [0,1]")
    if positivity >= bands.healthy_min:
        category = Category.HEALTHY
    elif positivity >= bands.reflect_min:
        category = Category.NEEDS_REFLECTION
    else:
        category = Category.UNHEALTHY
    templates = feedback or {}
    return category, templates.get(category, DEFAULT_FEEDBACK[category])


def score_responses(
    questionnaire: Questionnaire,
    responses: ResponseSet,
    bands: ScoringBands = ScoringBands(),
    clock: Clock | None = None,
) -> Assessment:
    if responses.questionnaire_id != questionnaire.questionnaire_id or responses.version != questionnaire.version:
        raise VersionMismatch(
            f"responses are for {responses.questionnaire_id!r} v{responses.version}, "
            f"questionnaire is {questionnaire.questionnaire_id!r} v{questionnaire.version}"
        )
    known = {q.question_id for q in questionnaire.questions}
    missing = sorted(known - responses.answers.keys())
    if missing:
        raise IncompleteResponses(f"missing answers for: {', '.join(missing)}")
    unknown = sorted(responses.answers.keys() - known)
    if unknown:
        raise ValidationError(f"answers reference unknown questions: {', '.join(unknown)}")

    total_weight = 0.0
    total = 0.0
    dim_weight: dict[Dimension, float] = {}
    dim_total: dict[Dimension, float] = {}
    for question in questionnaire.questions:
        index = responses.answers[question.question_id]
        if not isinstance(index, int) or isinstance(index, bool) or not (0 <= index < len(question.options)):
            raise ValidationError(f"question {question.question_id!r}: option index {index!r} out of range")
        effective = question.effective_score(index)
        total += question.weight * effective
        total_weight += question.weight
        dim_total[question.dimension] = dim_total.get(question.dimension, 0.0) + question.weight * effective
        dim_weight[question.dimension] = dim_weight.get(question.dimension, 0.0) + question.weight

    positivity = total / total_weight
    category, feedback = categorize(positivity, bands, questionnaire.feedback)
    return Assessment(
        positivity=positivity,
        category=category,
        dimensions={d: dim_total[d] / dim_weight[d] for d in dim_total},
        feedback=feedback,
        scored_at=(clock or SystemClock()).now(),
    )
