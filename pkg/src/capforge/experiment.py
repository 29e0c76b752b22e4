"""Desk-scale experiment harness: threshold calibration and scripted refinement.

Two protocols. The calibration sweep synthesizes rule-driven histories over a
grid of environment sizes and counts how many factors clear the correlation
threshold, the sanity check behind the default threshold of 0.5 and the
10-scenes-per-factor floor. The refinement experiment replays the
author-test-refine loop with a scripted stand-in for the human and measures
accuracy on a held-out split before and after.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

from .association import build_report
from .engine import MetricsReport, evaluate, metrics_to_doc
from .errors import ActionNeverVaries, EmptyTrigger
from .history import RoutineBlock, RoutineSpec, split_history, synthesize_history
from .model import (
    ContextFactor,
    Environment,
    EnvironmentConfig,
    FactorKind,
    InstanceRef,
    ValidatedPolicy,
    policy_to_doc,
    validate_environment,
)
from .testgen import (
    Condition,
    Decision,
    GenerationConfig,
    TestCase,
    apply_refinement,
    enact,
    generate_suite,
)


class RefinementMode(str, Enum):
    ACCEPT_ALL = "accept-all-suggestions"
    ACCEPT_IF_CONSISTENT = "accept-if-consistent-with-hidden-rule"
    REJECT_ALL = "reject-all"


@dataclass(frozen=True)
class ScriptedUser:
    """Replaces a study participant: reacts to cases per a fixed strategy.

    accept-all follows every nudge (add on 1, drop the factor on 2, widen on
    3); accept-if-consistent consults the hidden rule the way a participant
    consults their intent; reject-all dismisses everything (baseline).
    """

    hidden_rule: ValidatedPolicy
    refinement_policy: RefinementMode

    def decide(self, case: TestCase) -> Decision:
        mode = self.refinement_policy
        if mode is RefinementMode.REJECT_ALL:
            return Decision.DISMISS
        if mode is RefinementMode.ACCEPT_ALL:
            if case.condition is Condition.WEAK_FACTOR:
                return Decision.REMOVE_FOCUS_FACTOR
            if case.condition is Condition.MISSING_FACTOR:
                return Decision.ADD_SUGGESTED
            return Decision.WIDEN_SELECTED
        # accept-if-consistent
        intended = self.hidden_rule.trigger.get(case.focus_factor)
        if case.condition is Condition.MISSING_FACTOR:
            if intended and case.suggested.instance in intended:
                return Decision.ADD_SUGGESTED
            return Decision.DISMISS
        # conditions 2 and 3: the factor is already in the trigger
        if intended is None:
            return Decision.REMOVE_FOCUS_FACTOR
        if case.suggested.instance in intended:
            return Decision.WIDEN_SELECTED
        return Decision.DISMISS


@dataclass(frozen=True)
class ExperimentReport:
    """Before/after accuracy of one scripted refinement run."""

    mode: RefinementMode
    seed: int
    initial: MetricsReport
    final: MetricsReport
    regenerations: int
    cases_viewed: int
    status: str  # converged | stalled | case_cap
    final_policy: ValidatedPolicy

    @property
    def improvement(self) -> float:
        return self.final.f_score - self.initial.f_score


def run_refinement_experiment(
    env: Environment,
    routine: RoutineSpec,
    hidden_rule: ValidatedPolicy,
    initial_policy: ValidatedPolicy,
    mode: RefinementMode,
    seed: int,
    *,
    case_cap: int = 20,
    train_fraction: float = 0.75,
    threshold: float = 0.5,
) -> ExperimentReport:
    """Replay author-test-refine with a scripted user; score on the holdout.

    The routine is re-seeded with ``seed`` so seed sweeps vary the data. The
    association report is built once on the train split (it depends only on
    the action, which refinement never edits). The loop regenerates the suite
    after each full pass and stops when the suite comes back empty, when a
    pass changes nothing (all cases dismissed), or at the case cap; the last
    is reported as status="case_cap" rather than raised.
    """
    routine = replace(routine, seed=seed)
    history = synthesize_history(routine, env)
    train, holdout = split_history(history, train_fraction, seed)
    report = build_report(train, initial_policy.action, env)
    user = ScriptedUser(hidden_rule=hidden_rule, refinement_policy=RefinementMode(mode))
    config = GenerationConfig(threshold=threshold, seed=seed)

    policy = initial_policy
    initial_metrics = evaluate(policy, holdout)
    regenerations = 0
    viewed = 0
    status = "case_cap"
    while viewed < case_cap:
        suite = generate_suite(policy, report, env, config)
        regenerations += 1
        if not suite.cases:
            status = "converged"
            break
        progressed = False
        for case in suite.cases:
            if viewed >= case_cap:
                break
            viewed += 1
            enact(case, policy, env)  # feedforward step a human would watch
            try:
                refined = apply_refinement(policy, case, user.decide(case))
            except EmptyTrigger:
                # removing the only trigger factor is not an available edit;
                # the scripted user abandons it (the UI disables that control)
                continue
            if refined.trigger != policy.trigger:
                progressed = True
            policy = refined
        if not progressed:
            status = "stalled"
            break
    return ExperimentReport(
        mode=RefinementMode(mode),
        seed=seed,
        initial=initial_metrics,
        final=evaluate(policy, holdout),
        regenerations=regenerations,
        cases_viewed=viewed,
        status=status,
        final_policy=policy,
    )


def experiment_to_doc(report: ExperimentReport) -> dict:
    return {
        "mode": report.mode.value,
        "seed": report.seed,
        "initial": metrics_to_doc(report.initial),
        "final": metrics_to_doc(report.final),
        "improvement": report.improvement,
        "regenerations": report.regenerations,
        "cases_viewed": report.cases_viewed,
        "status": report.status,
        "final_policy": policy_to_doc(report.final_policy),
    }


# --- calibration sweep -----------------------------------------------------------

_MISC_KINDS = (
    FactorKind.ACTIVITY,
    FactorKind.LOCATION,
    FactorKind.USER_STATE,
    FactorKind.DIGITAL_STATE,
    FactorKind.OBJECT_STATE,
)


def make_calibration_environment(n_factors: int) -> tuple[Environment, InstanceRef]:
    """Synthetic home with ``n_factors`` factors and one controllable device.

    Returns the environment and the device-on action the hidden rule drives.
    Factors beyond time/device are three-instance nominals of cycling kinds.
    """
    if n_factors < 4:
        raise ValueError("calibration environments need at least 4 factors")
    factors = [
        ContextFactor(
            id="time",
            kind=FactorKind.TIME,
            instances=("morning", "noon", "evening", "night"),
            default_instance="morning",
        ),
        ContextFactor(
            id="device",
            kind=FactorKind.OBJECT_STATE,
            instances=("off", "on"),
            controllable=True,
        ),
    ]
    for i in range(n_factors - 2):
        fid = f"ctx{i + 1}"
        factors.append(
            ContextFactor(
                id=fid,
                kind=_MISC_KINDS[i % len(_MISC_KINDS)],
                instances=(f"{fid}-a", f"{fid}-b", f"{fid}-c"),
                default_instance=f"{fid}-a",
            )
        )
    env = validate_environment(
        EnvironmentConfig(name=f"calibration-{n_factors}", factors=tuple(factors))
    )
    return env, InstanceRef(factor="device", instance="on")


def make_calibration_routine(
    env: Environment, days: int, noise: float, seed: int
) -> RoutineSpec:
    """Rule-driven routine: device on exactly when ctx1 and ctx2 sit at 'a'.

    The two rule factors move together, so each alone pins the device state
    (coefficient 1 at zero noise); every time block shares the same option
    mix, so time carries no signal; untouched factors idle at defaults.
    """
    options = (
        (1.0, {"ctx1": "ctx1-a", "ctx2": "ctx2-a", "device": "on"}),
        (1.0, {"ctx1": "ctx1-b", "ctx2": "ctx2-b", "device": "off"}),
        (1.0, {"ctx1": "ctx1-c", "ctx2": "ctx2-b", "device": "off"}),
        (1.0, {"ctx1": "ctx1-b", "ctx2": "ctx2-c", "device": "off"}),
    )
    blocks = tuple(
        RoutineBlock(time_instance=t, options=options)
        for t in ("morning", "noon", "evening", "night")
    )
    return RoutineSpec(blocks=blocks, days=days, noise=noise, seed=seed)


@dataclass(frozen=True)
class CalibrationCell:
    factor_count: int
    scene_count: int
    above_threshold: int
    factors: tuple[str, ...]
    degenerate: bool = False  # action never varied in the sampled slice


@dataclass(frozen=True)
class CalibrationTable:
    threshold: float
    noise: float
    seed: int
    cells: tuple[CalibrationCell, ...]

    def max_above_threshold(self) -> int:
        return max((c.above_threshold for c in self.cells), default=0)


def run_calibration(
    factor_counts: Sequence[int],
    scene_counts: Sequence[int] | None = None,
    *,
    threshold: float = 0.5,
    noise: float = 0.05,
    seed: int = 0,
) -> CalibrationTable:
    """Sweep the (factor count × scene count) grid and count correlated factors.

    ``scene_counts=None`` puts each cell at the minimum-history floor of
    10 × factors. Cells whose sampled slice never (or always) shows the
    action are marked degenerate instead of crashing.
    """
    cells = []
    for n_factors in factor_counts:
        env, action = make_calibration_environment(n_factors)
        for n_scenes in scene_counts or (10 * n_factors,):
            cell_seed = seed * 1_000_003 + n_factors * 101 + n_scenes
            blocks_per_day = 4
            days = math.ceil(n_scenes / blocks_per_day)
            routine = make_calibration_routine(env, days=days, noise=noise, seed=cell_seed)
            history = synthesize_history(routine, env)
            history = replace(history, scenes=history.scenes[:n_scenes])
            try:
                report = build_report(history, action, env)
            except ActionNeverVaries:
                cells.append(
                    CalibrationCell(
                        factor_count=n_factors,
                        scene_count=n_scenes,
                        above_threshold=0,
                        factors=(),
                        degenerate=True,
                    )
                )
                continue
            above = tuple(
                f for f, u in report.u_by_factor.items() if u > threshold
            )
            cells.append(
                CalibrationCell(
                    factor_count=n_factors,
                    scene_count=n_scenes,
                    above_threshold=len(above),
                    factors=above,
                )
            )
    return CalibrationTable(threshold=threshold, noise=noise, seed=seed, cells=tuple(cells))


def calibration_to_doc(table: CalibrationTable) -> dict:
    return {
        "threshold": table.threshold,
        "noise": table.noise,
        "seed": table.seed,
        "cells": [
            {
                "factors": c.factor_count,
                "scenes": c.scene_count,
                "above_threshold": c.above_threshold,
                "factor_ids": list(c.factors),
                "degenerate": c.degenerate,
            }
            for c in table.cells
        ],
    }


def format_calibration_table(table: CalibrationTable) -> str:
    """Aligned-text rendering for terminals."""
    header = (
        f"correlation threshold={table.threshold}  noise={table.noise}  seed={table.seed}"
    )
    lines = [header, f"{'factors':>8} {'scenes':>8} {'above':>6}  correlated factors"]
    for c in table.cells:
        note = " (degenerate)" if c.degenerate else ""
        lines.append(
            f"{c.factor_count:>8} {c.scene_count:>8} {c.above_threshold:>6}  "
            f"{', '.join(c.factors) or '-'}{note}"
        )
    return "\n".join(lines)
