"""capforge: author, unit-test, and refine context-aware trigger-action policies.

The engine records context histories (scenes of factor → instance
assignments), measures which factors co-move with a chosen action via
uncertainty coefficients and concurrency counts, generates personalized unit
test cases that expose under- and over-specified triggers, enacts them in
simulation, and scores policies on held-out history. A small HTTP service
(`capforge serve`) exposes the whole loop to interactive clients.
"""

from .association import (
    AssociationReport,
    build_report,
    conditional_entropy,
    entropy,
    uncertainty_coefficient,
)
from .engine import (
    FactorMatch,
    MetricsReport,
    Outcome,
    classify_scene,
    evaluate,
    trigger_satisfied,
)
from .errors import CapforgeError
from .history import (
    ContextHistory,
    RoutineBlock,
    RoutineSpec,
    SizeVerdict,
    append_scene,
    check_minimum_size,
    load_history,
    new_day,
    save_history,
    split_history,
    synthesize_history,
)
from .model import (
    ContextFactor,
    ContextScene,
    Environment,
    EnvironmentConfig,
    FactorKind,
    InstanceRef,
    Policy,
    ValidatedPolicy,
    load_environment,
    normalize_scene,
    save_environment,
    validate_environment,
    validate_policy,
)
from .testgen import (
    Condition,
    Decision,
    EnactmentResult,
    GenerationConfig,
    InsufficientHistoryWarning,
    TestCase,
    TestSuite,
    apply_refinement,
    assess_factor,
    compose_case,
    enact,
    generate_suite,
)
from .experiment import (
    CalibrationTable,
    ExperimentReport,
    RefinementMode,
    ScriptedUser,
    run_calibration,
    run_refinement_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "AssociationReport",
    "CalibrationTable",
    "CapforgeError",
    "Condition",
    "ContextFactor",
    "ContextHistory",
    "ContextScene",
    "Decision",
    "EnactmentResult",
    "Environment",
    "EnvironmentConfig",
    "ExperimentReport",
    "FactorKind",
    "FactorMatch",
    "GenerationConfig",
    "InstanceRef",
    "InsufficientHistoryWarning",
    "MetricsReport",
    "Outcome",
    "Policy",
    "RefinementMode",
    "RoutineBlock",
    "RoutineSpec",
    "ScriptedUser",
    "SizeVerdict",
    "TestCase",
    "TestSuite",
    "ValidatedPolicy",
    "append_scene",
    "apply_refinement",
    "assess_factor",
    "build_report",
    "check_minimum_size",
    "classify_scene",
    "compose_case",
    "conditional_entropy",
    "enact",
    "entropy",
    "evaluate",
    "generate_suite",
    "load_environment",
    "load_history",
    "new_day",
    "normalize_scene",
    "run_calibration",
    "run_refinement_experiment",
    "save_environment",
    "save_history",
    "split_history",
    "synthesize_history",
    "trigger_satisfied",
    "uncertainty_coefficient",
    "validate_environment",
    "validate_policy",
]
