"""Ready-made studio-apartment fixtures shared by demos, tests, and the CLI.

The studio models a one-room home: a clock, five locations, everyday
activities, a TV and a music player (both controllable), and a working/not
user state. Its routine is built so that eating, music-off, and being on the
sofa all line up with TV-on, the classic under-specified-trigger setup where
a "turn on the TV when I'm on the sofa" policy fires far too often.
"""

from __future__ import annotations

from .history import RoutineBlock, RoutineSpec
from .model import (
    TIME_VOCABULARY,
    ContextFactor,
    Environment,
    EnvironmentConfig,
    FactorKind,
    InstanceRef,
    Policy,
    ValidatedPolicy,
    validate_environment,
    validate_policy,
)


def studio_environment() -> Environment:
    """Six-factor studio apartment with floorplan anchors."""
    config = EnvironmentConfig(
        name="studio",
        factors=(
            ContextFactor(
                id="time",
                kind=FactorKind.TIME,
                instances=TIME_VOCABULARY,
                default_instance="morning",
            ),
            ContextFactor(
                id="location",
                kind=FactorKind.LOCATION,
                instances=("sofa", "desk", "dining-table", "kitchen", "bed"),
                anchor=(0.5, 0.55),
            ),
            ContextFactor(
                id="activity",
                kind=FactorKind.ACTIVITY,
                instances=("eating", "cooking", "reading", "phone", "exercise"),
                anchor=(0.42, 0.48),
            ),
            ContextFactor(
                id="tv",
                kind=FactorKind.OBJECT_STATE,
                instances=("off", "on"),
                controllable=True,
                anchor=(0.72, 0.3),
            ),
            ContextFactor(
                id="music",
                kind=FactorKind.OBJECT_STATE,
                instances=("off", "on"),
                controllable=True,
                anchor=(0.2, 0.62),
            ),
            ContextFactor(
                id="is-working",
                kind=FactorKind.USER_STATE,
                instances=("working",),
            ),
        ),
    )
    return validate_environment(config)


def studio_routine(days: int = 40, noise: float = 0.0, seed: int = 0) -> RoutineSpec:
    """Daily routine: five time blocks, each drawing one of four options.

    Eating and music-off happen exactly when the TV is on; the sofa also
    hosts plenty of TV-off reading, so location alone is a poor trigger.
    Every block shares the option mix, so time carries no signal.
    """
    options = (
        (1.0, {"location": "sofa", "activity": "eating", "music": "off", "tv": "on"}),
        (1.5, {"location": "sofa", "activity": "reading", "music": "on", "tv": "off"}),
        (0.25, {"location": "desk", "activity": "phone", "music": "on", "tv": "off",
                "is-working": "working"}),
        (0.25, {"location": "kitchen", "activity": "cooking", "music": "on", "tv": "off"}),
    )
    blocks = tuple(
        RoutineBlock(time_instance=t, options=options)
        for t in ("morning", "noon", "afternoon", "evening", "night")
    )
    return RoutineSpec(blocks=blocks, days=days, noise=noise, seed=seed)


def studio_hidden_rule(env: Environment | None = None) -> ValidatedPolicy:
    """The intent behind the routine: TV on while eating on the sofa, music off."""
    env = env or studio_environment()
    return validate_policy(
        Policy(
            id="tv-while-eating",
            action=InstanceRef(factor="tv", instance="on"),
            trigger={
                "location": ("sofa",),
                "activity": ("eating",),
                "music": ("off",),
            },
        ),
        env,
    )


def studio_initial_policy(env: Environment | None = None) -> ValidatedPolicy:
    """The naive first draft: trigger on the sofa alone (under-specified)."""
    env = env or studio_environment()
    return validate_policy(
        Policy(
            id="tv-while-eating",
            action=InstanceRef(factor="tv", instance="on"),
            trigger={"location": ("sofa",)},
        ),
        env,
    )
