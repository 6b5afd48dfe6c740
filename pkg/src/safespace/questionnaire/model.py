"""Questionnaire domain model and definition-file loading.

Definition files are JSON:

    {"id": ..., "version": 1,
     "questions": [{"id", "prompt", "dimension", "weight", "reverse",
                    "options": [{"label", "score"}, ...]}, ...],
     "feedback": {"Healthy": ..., "NeedsReflection": ..., "Unhealthy": ...}}

The bundled instrument is implementer-authored and not a clinical tool.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from importlib import resources
from pathlib import Path

from safespace.clock import rfc3339
from safespace.errors import ParseError, ValidationError


class Dimension(Enum):
    COMMUNICATION = "Communication"
    TRUST = "Trust"
    EMOTIONAL_WELL_BEING = "EmotionalWellBeing"


class Category(Enum):
    HEALTHY = "Healthy"
    NEEDS_REFLECTION = "NeedsReflection"
    UNHEALTHY = "Unhealthy"


@dataclass(frozen=True)
class Question:
    question_id: str
    prompt: str
    dimension: Dimension
    options: tuple[tuple[str, float], ...]  # (label, positivity score in [0,1])
    weight: float = 1.0
    reverse_scored: bool = False

    def effective_score(self, option_index: int) -> float:
        raw = self.options[option_index][1]
        return 1.0 - raw if self.reverse_scored else raw


@dataclass(frozen=True)
class Questionnaire:
    questionnaire_id: str
    version: int
    questions: tuple[Question, ...]
    feedback: dict[Category, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "id": self.questionnaire_id,
            "version": self.version,
            "questions": [
                {
                    "id": q.question_id,
                    "prompt": q.prompt,
                    "dimension": q.dimension.value,
                    "weight": q.weight,
                    "reverse": q.reverse_scored,
                    "options": [{"label": label, "score": score} for label, score in q.options],
                }
                for q in self.questions
            ],
        }


@dataclass(frozen=True)
class ResponseSet:
    questionnaire_id: str
    version: int
    answers: dict[str, int]  # question_id -> selected option index
    submitted_at: datetime | None = None


@dataclass(frozen=True)
class Assessment:
    positivity: float
    category: Category
    dimensions: dict[Dimension, float]
    feedback: str
    scored_at: datetime

    def to_json(self) -> dict:
        return {
            "positivity": self.positivity,
            "category": self.category.value,
            "dimensions": {d.value: p for d, p in self.dimensions.items()},
            "feedback": self.feedback,
            "scored_at": rfc3339(self.scored_at),
        }


def _build_question(raw: dict, index: int) -> Question:
    where = f"questions[{index}]"
    try:
        question_id = str(raw["id"])
        prompt = str(raw["prompt"])
        dimension = Dimension(raw["dimension"])
        options_raw = raw["options"]
    except KeyError as exc:
        raise ValidationError(f"{where}: missing field {exc}") from None
    except ValueError:
        raise ValidationError(f"{where}: unknown dimension {raw.get('dimension')!r}") from None
    weight = float(raw.get("weight", 1.0))
    if weight <= 0:
        raise ValidationError(f"{where}: weight must be positive, got {weight}")
    if not isinstance(options_raw, list) or len(options_raw) < 2:
        raise ValidationError(f"{where}: at least 2 options required")
    options = []
    for j, opt in enumerate(options_raw):
        try:
            label, score = str(opt["label"]), float(opt["score"])
        except (KeyError, TypeError, ValueError):
            raise ValidationError(f"{where}.options[{j}]: expected {{label, score}}") from None
        if not (0.0 <= score <= 1.0):
            raise ValidationError(f"{where}.options[{j}]: score {score} outside [0,1]")
        options.append((label, score))
    return Question(
        question_id=question_id,
        prompt=prompt,
        dimension=dimension,
        options=tuple(options),
        weight=weight,
        reverse_scored=bool(raw.get("reverse", False)),
    )


def load_questionnaire(path: str | Path) -> Questionnaire:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError(f"{path}: top level must be an object")

    questions = [_build_question(raw, i) for i, raw in enumerate(payload.get("questions", []))]
    if not questions:
        raise ValidationError("questionnaire has no questions")
    seen: set[str] = set()
    for q in questions:
        if q.question_id in seen:
            raise ValidationError(f"duplicate question id {q.question_id!r}")
        seen.add(q.question_id)

    feedback: dict[Category, str] = {}
    for key, template in payload.get("feedback", {}).items():
        try:
            feedback[Category(key)] = str(template)
        except ValueError:
            raise ValidationError(f"feedback key {key!r} is not a category") from None

    return Questionnaire(
        questionnaire_id=str(payload.get("id", "")),
        version=int(payload.get("version", 1)),
        questions=tuple(questions),
        feedback=feedback,
    )


def bundled_questionnaire_path() -> Path:
    return Path(resources.files("safespace.questionnaire").joinpath("data/relationship_v1.json"))  # type: ignore[arg-type]


def load_bundled_questionnaire() -> Questionnaire:
    return load_questionnaire(bundled_questionnaire_path())
