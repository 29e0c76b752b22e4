"""Trigger evaluation against scenes and accuracy scoring on held-out history.

A trigger fires on a scene when, for every factor it constrains, the scene's
instance is one of the selected instances (OR within a factor, AND across
factors). Scoring treats the action factor's recorded value as ground truth:
it is the label, never a feature; structurally guaranteed because the action
factor cannot appear in a trigger.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .errors import EnvironmentMismatch, HistoryEmpty
from .history import ContextHistory
from .model import ContextScene, ValidatedPolicy


class Outcome(str, Enum):
    TP = "TP"  # action expected and trigger fired
    FP = "FP"  # trigger fired but action not expected
    FN = "FN"  # action expected but trigger silent
    TN = "TN"  # correctly silent


@dataclass(frozen=True)
class FactorMatch:
    """Match detail for one trigger factor against one scene."""

    factor: str
    selected: tuple[str, ...]
    actual: str
    matched: bool


def trigger_satisfied(
    policy: ValidatedPolicy, scene: ContextScene
) -> tuple[bool, tuple[FactorMatch, ...]]:
    """Whether the trigger fires on the scene, with per-factor match detail."""
    matches = []
    for factor_id, selected in policy.trigger.items():
        try:
            actual = scene.assignments[factor_id]
        except KeyError:
            raise EnvironmentMismatch(
                f"scene {scene.seq} does not assign trigger factor {factor_id!r}"
            ) from None
        matches.append(
            FactorMatch(
                factor=factor_id,
                selected=selected,
                actual=actual,
                matched=actual in selected,
            )
        )
    return all(m.matched for m in matches), tuple(matches)


def classify_scene(policy: ValidatedPolicy, scene: ContextScene) -> Outcome:
    """Classify one scene into the 2×2 expected/predicted table."""
    if policy.action.factor not in scene.assignments:
        raise EnvironmentMismatch(
            f"scene {scene.seq} does not assign action factor {policy.action.factor!r}"
        )
    expected = scene.assignments[policy.action.factor] == policy.action.instance
    predicted, _ = trigger_satisfied(policy, scene)
    if expected and predicted:
        return Outcome.TP
    if not expected and predicted:
        return Outcome.FP
    if expected and not predicted:
        return Outcome.FN
    return Outcome.TN


@dataclass(frozen=True)
class MetricsReport:
    """Confusion counts plus precision/recall/F (0 when the denominator is 0)."""

    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f_score: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, tn: int) -> "MetricsReport":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f_score = (
            2 * precision * recall / (precision + recall) if precision + recall else 0.0
        )
        return cls(tp=tp, fp=fp, fn=fn, tn=tn, precision=precision, recall=recall, f_score=f_score)


def evaluate(policy: ValidatedPolicy, history: ContextHistory) -> MetricsReport:
    """Score the policy against every scene of a (held-out) history."""
    if not history.scenes:
        raise HistoryEmpty("cannot evaluate against an empty history")
    counts = {outcome: 0 for outcome in Outcome}
    for scene in history.scenes:
        counts[classify_scene(policy, scene)] += 1
    return MetricsReport.from_counts(
        tp=counts[Outcome.TP],
        fp=counts[Outcome.FP],
        fn=counts[Outcome.FN],
        tn=counts[Outcome.TN],
    )


def metrics_to_doc(metrics: MetricsReport) -> dict:
    return {
        "tp": metrics.tp,
        "fp": metrics.fp,
        "fn": metrics.fn,
        "tn": metrics.tn,
        "precision": metrics.precision,
        "recall": metrics.recall,
        "f_score": metrics.f_score,
    }


def metrics_from_doc(doc: Mapping) -> MetricsReport:
    return MetricsReport(
        tp=int(doc["tp"]),
        fp=int(doc["fp"]),
        fn=int(doc["fn"]),
        tn=int(doc["tn"]),
        precision=float(doc["precision"]),
        recall=float(doc["recall"]),
        f_score=float(doc["f_score"]),
    )


def match_to_doc(match: FactorMatch) -> dict:
    return {
        "factor": match.factor,
        "selected": list(match.selected),
        "actual": match.actual,
        "matched": match.matched,
    }
