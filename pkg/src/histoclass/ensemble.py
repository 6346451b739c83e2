"""Highest-confidence voting over scored member classifiers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .data import Dataset, Diagnosis
from .errors import DataError

PREFER_A = "prefer_A"


class ScoredClassifier(Protocol):
    name: str
    schema: tuple[str, ...]

    def predict(self, x) -> tuple[Diagnosis, float]: ...


@dataclass(frozen=True)
class ScoredPrediction:
    label: Diagnosis
    confidence: float
    member: str

    def __post_init__(self):
        if not 0.0 < self.confidence <= 1.0:
            raise DataError(f"confidence {self.confidence!r} outside (0, 1]")


@dataclass(frozen=True)
class EnsembleModel:
    members: tuple[ScoredClassifier, ...]
    tie_policy: str = PREFER_A

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if len(self.members) < 2:
            raise DataError("an ensemble needs at least two members")
        if self.tie_policy != PREFER_A:
            raise DataError(f"unknown tie policy {self.tie_policy!r}")
        schemas = {tuple(m.schema) for m in self.members}
        if len(schemas) != 1:
            raise DataError("ensemble members were trained on different schemas")

    @property
    def schema(self) -> tuple[str, ...]:
        return tuple(self.members[0].schema)

    @property
    def name(self) -> str:
        return "ensemble"

    def predict(self, x) -> tuple[Diagnosis, float]:
        p = ensemble_predict(self, x)
        return p.label, p.confidence


def vote(scored: Sequence[ScoredPrediction]) -> ScoredPrediction:
    """The most confident prediction wins; conflicting ties resolve to A."""
    top = max(p.confidence for p in scored)
    winners = [p for p in scored if p.confidence == top]
    labels = {p.label for p in winners}
    label = Diagnosis.A if Diagnosis.A in labels else Diagnosis.N
    return next(p for p in winners if p.label is label)


def ensemble_predict(e: EnsembleModel, sample) -> ScoredPrediction:
    x = np.asarray(sample, dtype=float).ravel()
    if x.size != len(e.schema):
        raise DataError(
            f"schema mismatch: ensemble expects {len(e.schema)} features, got {x.size}"
        )
    scored = []
    for member in e.members:
        try:
            label, confidence = member.predict(x)
            scored.append(ScoredPrediction(Diagnosis(label), float(confidence), member.name))
        except Exception as exc:
            exc.args = (f"member {member.name!r}: {exc}",) + exc.args[1:]
            raise
    return vote(scored)


@dataclass(frozen=True)
class EvaluatedPrediction:
    id: str
    actual: Diagnosis
    prediction: ScoredPrediction


def evaluate_classifier(model: ScoredClassifier, test: Dataset) -> list[EvaluatedPrediction]:
    """Score every test sample with any member-like classifier."""
    if tuple(test.schema) != tuple(model.schema):
        raise DataError(
            f"schema mismatch: model {list(model.schema)}, data {list(test.schema)}"
        )
    out = []
    for sid, actual, row in zip(test.ids, test.diagnoses, test.X):
        if isinstance(model, EnsembleModel):
            pred = ensemble_predict(model, row)
        else:
            label, confidence = model.predict(row)
            pred = ScoredPrediction(Diagnosis(label), float(confidence), model.name)
        out.append(EvaluatedPrediction(sid, actual, pred))
    return out


def ensemble_evaluate(e: EnsembleModel, test: Dataset) -> list[EvaluatedPrediction]:
    return evaluate_classifier(e, test)
