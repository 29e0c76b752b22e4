"""Unit-test-case generation, enactment, and refinement for policies.

Each candidate factor is assessed against two questions: is it already part
of the trigger, and does its uncertainty coefficient clear the threshold?
Three of the four outcomes yield a test case built around one suggested
instance chosen from the concurrency counts; the fourth (uncorrelated and
unselected) is taken as a deliberate user choice and produces nothing. Every
trigger factor other than the focus is filled with one instance drawn from
its selected set, so the case stays consistent with what was authored. With
n trigger factors a case therefore carries n or n+1 instances.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Any, Mapping

from .association import AssociationReport
from .errors import PolicyMismatch, StaleReport
from .engine import FactorMatch, match_to_doc, trigger_satisfied
from .model import (
    ContextScene,
    Environment,
    InstanceRef,
    Policy,
    ValidatedPolicy,
    instance_ref_from_doc,
    instance_ref_to_doc,
    normalize_scene,
    scene_to_doc,
    validate_policy,
)


class Condition(IntEnum):
    """Branch of the per-factor assessment (4 composes no case)."""

    MISSING_FACTOR = 1  # correlated but absent from the trigger (under-specified)
    WEAK_FACTOR = 2  # in the trigger but uncorrelated (over-specified)
    NARROW_SELECTION = 3  # in the trigger, but a busier instance was left out
    IRRELEVANT = 4  # uncorrelated and unselected: respected as intentional


class Decision(str, Enum):
    """How a user (or script) reacts to a test case."""

    ADD_SUGGESTED = "add_suggested"
    REMOVE_FOCUS_FACTOR = "remove_focus_factor"
    WIDEN_SELECTED = "widen_selected"
    DISMISS = "dismiss"


class InsufficientHistoryWarning(UserWarning):
    """History is below the recommended 10-scenes-per-factor floor."""


@dataclass(frozen=True)
class GenerationConfig:
    threshold: float = 0.5  # a factor counts as correlated when U strictly exceeds this
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")


@dataclass(frozen=True)
class TestCase:
    """One generated scenario focused on a single suspect factor."""

    id: str
    policy_id: str
    focus_factor: str
    condition: Condition
    suggested: InstanceRef
    fillers: Mapping[str, str]
    rationale: str

    def assignments(self) -> dict[str, str]:
        """The scenario's factor → instance map (suggested plus fillers)."""
        merged = {self.suggested.factor: self.suggested.instance}
        merged.update(self.fillers)
        return merged


@dataclass(frozen=True)
class TestSuite:
    policy_id: str
    threshold: float
    seed: int
    cases: tuple[TestCase, ...]

    def case(self, case_id: str) -> TestCase | None:
        for c in self.cases:
            if c.id == case_id:
                return c
        return None


@dataclass(frozen=True)
class EnactmentResult:
    """Fast-forward simulation outcome of running a case against its policy."""

    triggered: bool
    matches: tuple[FactorMatch, ...]
    scene: ContextScene


def assess_factor(
    factor_id: str,
    report: AssociationReport,
    policy: ValidatedPolicy,
    threshold: float = 0.5,
) -> Condition:
    """Place a candidate factor into one of the four assessment branches."""
    correlated = report.u_by_factor.get(factor_id, 0.0) > threshold
    in_trigger = factor_id in policy.trigger
    if correlated and not in_trigger:
        return Condition.MISSING_FACTOR
    if not correlated and in_trigger:
        return Condition.WEAK_FACTOR
    if correlated and in_trigger:
        return Condition.NARROW_SELECTION
    return Condition.IRRELEVANT


def _argmax_count(
    instances: tuple[str, ...], counts: Mapping[str, int]
) -> tuple[str, int]:
    """Instance with the highest count; ties keep the earliest listed."""
    best, best_count = instances[0], counts.get(instances[0], 0)
    for v in instances[1:]:
        c = counts.get(v, 0)
        if c > best_count:
            best, best_count = v, c
    return best, best_count


def compose_case(
    factor_id: str,
    condition: Condition,
    report: AssociationReport,
    policy: ValidatedPolicy,
    config: GenerationConfig,
    rng: random.Random,
) -> TestCase | None:
    """Pick the suggested instance for a branch and fill the remaining factors.

    Returns None when the branch has nothing demonstrable: condition 2 with
    no positive-count unselected instance, or condition 3 when no unselected
    instance strictly out-counts the selected ones. All tie-breaks follow the
    environment's frozen instance order, so output is deterministic.
    """
    env = policy.env
    action = report.action
    instances = env.instances(factor_id)
    counts = report.concurrency.get(factor_id, {})
    selected = set(policy.trigger.get(factor_id, ()))

    if condition == Condition.MISSING_FACTOR:
        suggested, _ = _argmax_count(instances, counts)
        rationale = (
            f"{factor_id} is usually '{suggested}' when {action.factor} is "
            f"'{action.instance}', but the trigger ignores {factor_id}."
        )
    elif condition == Condition.WEAK_FACTOR:
        candidates = [
            v for v in instances if v not in selected and counts.get(v, 0) > 0
        ]
        if not candidates:
            return None
        suggested = min(candidates, key=lambda v: counts[v])
        rationale = (
            f"The trigger requires {factor_id}, yet {factor_id}='{suggested}' "
            f"rarely coincides with {action.factor}='{action.instance}'."
        )
    elif condition == Condition.NARROW_SELECTION:
        best, best_count = _argmax_count(instances, counts)
        if best in selected:
            return None
        max_selected = max((counts.get(v, 0) for v in selected), default=0)
        if best_count <= max_selected:
            return None
        suggested = best
        rationale = (
            f"{factor_id}='{suggested}' coincides with {action.factor}="
            f"'{action.instance}' more often than any selected {factor_id} instance."
        )
    else:
        raise ValueError(f"condition {condition} composes no test case")

    fillers = {
        g: rng.choice(policy.trigger[g])
        for g in policy.trigger
        if g != factor_id
    }
    return TestCase(
        id=f"case-{factor_id}",
        policy_id=policy.id,
        focus_factor=factor_id,
        condition=condition,
        suggested=InstanceRef(factor=factor_id, instance=suggested),
        fillers=fillers,
        rationale=rationale,
    )


def generate_suite(
    policy: ValidatedPolicy,
    report: AssociationReport,
    env: Environment | None = None,
    config: GenerationConfig = GenerationConfig(),
) -> TestSuite:
    """Walk every candidate factor in environment order and collect cases.

    The action's own factor is skipped (a trigger cannot reference it, so no
    case about it could be acted on). Deterministic given (policy, report,
    config). Raises StaleReport when the report was built for another action;
    warns (but proceeds) when the backing history was undersized.
    """
    env = env or policy.env
    if report.action != policy.action:
        raise StaleReport(
            f"report was built for {report.action.factor}={report.action.instance}, "
            f"policy acts on {policy.action.factor}={policy.action.instance}"
        )
    required = 10 * len(env.factors)
    if report.scene_count < required:
        warnings.warn(
            f"history has {report.scene_count} scenes; "
            f"coefficients are unreliable below {required}",
            InsufficientHistoryWarning,
            stacklevel=2,
        )
    rng = random.Random(config.seed)
    cases = []
    for factor_id in env.factor_ids:
        if factor_id == policy.action.factor:
            continue
        condition = assess_factor(factor_id, report, policy, config.threshold)
        if condition == Condition.IRRELEVANT:
            continue
        case = compose_case(factor_id, condition, report, policy, config, rng)
        if case is not None:
            cases.append(case)
    return TestSuite(
        policy_id=policy.id,
        threshold=config.threshold,
        seed=config.seed,
        cases=tuple(cases),
    )


def enact(
    case: TestCase, policy: ValidatedPolicy, env: Environment | None = None
) -> EnactmentResult:
    """Simulate the case's scenario and report whether the action would fire.

    The scenario scene takes the suggested instance plus the fillers; every
    other factor sits at its default.
    """
    env = env or policy.env
    if case.policy_id != policy.id:
        raise PolicyMismatch(
            f"case {case.id!r} was generated for policy {case.policy_id!r}, "
            f"not {policy.id!r}"
        )
    scene = normalize_scene(case.assignments(), env, seq=0)
    triggered, matches = trigger_satisfied(policy, scene)
    return EnactmentResult(triggered=triggered, matches=matches, scene=scene)


def apply_refinement(
    policy: ValidatedPolicy, case: TestCase, decision: Decision
) -> ValidatedPolicy:
    """Edit the trigger according to the user's decision and revalidate.

    add_suggested inserts the focus factor with the suggested instance (or
    unions it into an existing selection); widen_selected is the explicit
    union form; remove_focus_factor drops the factor; dismiss returns the
    policy unchanged. Validation errors (e.g. removing the last factor)
    propagate.
    """
    if case.policy_id != policy.id:
        raise PolicyMismatch(
            f"case {case.id!r} belongs to policy {case.policy_id!r}, not {policy.id!r}"
        )
    decision = Decision(decision)
    if decision is Decision.DISMISS:
        return policy
    trigger: dict[str, tuple[str, ...]] = {f: vs for f, vs in policy.trigger.items()}
    focus = case.focus_factor
    if decision is Decision.REMOVE_FOCUS_FACTOR:
        trigger.pop(focus, None)
    else:  # ADD_SUGGESTED / WIDEN_SELECTED
        existing = set(trigger.get(focus, ()))
        existing.add(case.suggested.instance)
        trigger[focus] = tuple(existing)
    return validate_policy(
        Policy(id=policy.id, action=policy.action, trigger=trigger), policy.env
    )


# --- document codecs ----------------------------------------------------------


def case_to_doc(case: TestCase) -> dict:
    return {
        "id": case.id,
        "policy_id": case.policy_id,
        "focus_factor": case.focus_factor,
        "condition": int(case.condition),
        "suggested": instance_ref_to_doc(case.suggested),
        "fillers": dict(case.fillers),
        "rationale": case.rationale,
    }


def case_from_doc(doc: Mapping[str, Any]) -> TestCase:
    return TestCase(
        id=doc["id"],
        policy_id=doc["policy_id"],
        focus_factor=doc["focus_factor"],
        condition=Condition(int(doc["condition"])),
        suggested=instance_ref_from_doc(doc["suggested"]),
        fillers=dict(doc["fillers"]),
        rationale=doc["rationale"],
    )


def suite_to_doc(suite: TestSuite) -> dict:
    return {
        "policy_id": suite.policy_id,
        "threshold": suite.threshold,
        "seed": suite.seed,
        "cases": [case_to_doc(c) for c in suite.cases],
    }


def suite_from_doc(doc: Mapping[str, Any]) -> TestSuite:
    return TestSuite(
        policy_id=doc["policy_id"],
        threshold=float(doc["threshold"]),
        seed=int(doc["seed"]),
        cases=tuple(case_from_doc(c) for c in doc["cases"]),
    )


def enactment_to_doc(result: EnactmentResult) -> dict:
    return {
        "triggered": result.triggered,
        "matches": [match_to_doc(m) for m in result.matches],
        "scene": scene_to_doc(result.scene),
    }
