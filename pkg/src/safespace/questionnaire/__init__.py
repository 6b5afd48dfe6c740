from safespace.questionnaire.model import (
    Assessment,
    Category,
    Dimension,
    Question,
    Questionnaire,
    ResponseSet,
    bundled_questionnaire_path,
    load_bundled_questionnaire,
    load_questionnaire,
)
from safespace.questionnaire.scoring import ScoringBands, categorize, score_responses

__all__ = [
    "Assessment",
    "Category",
    "Dimension",
    "Question",
    "Questionnaire",
    "ResponseSet",
    "ScoringBands",
    "bundled_questionnaire_path",
    "categorize",
    "load_bundled_questionnaire",
    "load_questionnaire",
    "score_responses",
]
