"""Entropy-based association between context factors and a target action.

Ranks factors by how much knowing their instance reduces uncertainty about
whether the action instance is present (Theil's uncertainty coefficient,
https://en.wikipedia.org/wiki/Uncertainty_coefficient), and tallies how often
each instance co-occurs with the action. Both feed test-case generation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import log2
from typing import Any, Mapping, Sequence

from .errors import (
    ActionNeverVaries,
    EmptySequence,
    HistoryEmpty,
    LengthMismatch,
)
from .history import ContextHistory
from .model import (
    Environment,
    InstanceRef,
    instance_ref_from_doc,
    instance_ref_to_doc,
)

#: Binarized action-series labels: the action instance is present in a scene, or not.
PRESENT = "present"
ABSENT = "absent"


def entropy(labels: Sequence) -> float:
    """Shannon entropy in bits of the empirical distribution of ``labels``."""
    if len(labels) == 0:
        raise EmptySequence("entropy of an empty sequence is undefined")
    total = len(labels)
    return -sum(
        (count / total) * log2(count / total) for count in Counter(labels).values()
    )


def conditional_entropy(x: Sequence, y: Sequence) -> float:
    """H(X|Y) in bits: expected entropy of x within each y-class."""
    if len(x) != len(y):
        raise LengthMismatch(f"series lengths differ: {len(x)} vs {len(y)}")
    if len(x) == 0:
        raise EmptySequence("conditional entropy of empty sequences is undefined")
    total = len(x)
    y_counts = Counter(y)
    joint_counts = Counter(zip(x, y))
    h = 0.0
    for (_, yv), joint in joint_counts.items():
        p_joint = joint / total
        p_y = y_counts[yv] / total
        h -= p_joint * log2(p_joint / p_y)
    return h


def uncertainty_coefficient(x: Sequence, y: Sequence) -> float:
    """U(X|Y) = (H(X) − H(X|Y)) / H(X), in [0, 1].

    0 means y tells nothing about x, 1 means y determines x. Asymmetric:
    U(X|Y) and U(Y|X) generally differ. By convention returns 1 when H(X)=0
    (a constant x is fully "explained" by anything).
    """
    h_x = entropy(x)
    if h_x == 0.0:
        return 1.0
    u = (h_x - conditional_entropy(x, y)) / h_x
    # guard the [0, 1] range against float round-off
    return min(1.0, max(0.0, u))


@dataclass(frozen=True)
class AssociationReport:
    """Per-factor coefficients and per-instance co-occurrence counts.

    ``u_by_factor[f]`` is U(action-present | f); ``concurrency[f][v]`` counts
    scenes where the action instance was present and factor f held v (only
    observed instances appear). The action's own factor is excluded.
    """

    action: InstanceRef
    u_by_factor: Mapping[str, float]
    concurrency: Mapping[str, Mapping[str, int]]
    action_support: int
    scene_count: int

    def concurrency_count(self, factor_id: str, instance_id: str) -> int:
        return self.concurrency.get(factor_id, {}).get(instance_id, 0)


def build_report(
    history: ContextHistory,
    action: InstanceRef,
    env: Environment | None = None,
) -> AssociationReport:
    """Tabulate uncertainty coefficients and concurrency counts for an action.

    Raises HistoryEmpty on an empty history and ActionNeverVaries when the
    action instance is present in every scene or in none (the coefficient
    would be degenerate and the counts 0 or everything).
    """
    env = env or history.env
    scenes = history.scenes
    if not scenes:
        raise HistoryEmpty("cannot analyze an empty history")
    env.require_instance(action.factor, action.instance)
    action_series = [
        PRESENT if s.assignments[action.factor] == action.instance else ABSENT
        for s in scenes
    ]
    support = action_series.count(PRESENT)
    if support == 0 or support == len(scenes):
        raise ActionNeverVaries(
            f"{action.factor}={action.instance} is "
            f"{'always' if support else 'never'} present in the history"
        )
    u_by_factor: dict[str, float] = {}
    concurrency: dict[str, dict[str, int]] = {}
    for factor in env.factors:
        if factor.id == action.factor:
            continue
        series = [s.assignments[factor.id] for s in scenes]
        u_by_factor[factor.id] = uncertainty_coefficient(action_series, series)
        counts = Counter(
            value
            for value, present in zip(series, action_series)
            if present == PRESENT
        )
        concurrency[factor.id] = {
            v: counts[v] for v in factor.instances if counts[v] > 0
        }
    return AssociationReport(
        action=action,
        u_by_factor=u_by_factor,
        concurrency=concurrency,
        action_support=support,
        scene_count=len(scenes),
    )


def report_to_doc(report: AssociationReport) -> dict:
    return {
        "action": instance_ref_to_doc(report.action),
        "action_support": report.action_support,
        "scene_count": report.scene_count,
        "u_by_factor": dict(report.u_by_factor),
        "concurrency": {f: dict(c) for f, c in report.concurrency.items()},
    }


def report_from_doc(doc: Mapping[str, Any]) -> AssociationReport:
    return AssociationReport(
        action=instance_ref_from_doc(doc["action"]),
        u_by_factor=dict(doc["u_by_factor"]),
        concurrency={f: dict(c) for f, c in doc["concurrency"].items()},
        action_support=int(doc["action_support"]),
        scene_count=int(doc["scene_count"]),
    )
