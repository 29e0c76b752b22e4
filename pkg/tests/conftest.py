import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles / randgen helpers

from capforge.model import (
    ContextFactor,
    ContextScene,
    EnvironmentConfig,
    FactorKind,
    InstanceRef,
    Policy,
    validate_environment,
    validate_policy,
)
from capforge.history import ContextHistory
from capforge.presets import studio_environment, studio_routine


@pytest.fixture(scope="session")
def studio_env():
    return studio_environment()


@pytest.fixture(scope="session")
def studio_noise_free():
    import capforge

    env = studio_environment()
    return env, capforge.synthesize_history(studio_routine(noise=0.0, seed=0), env)


@pytest.fixture
def tiny_env():
    """Three factors: tv (controllable), time, location; the minimal config."""
    return validate_environment(
        EnvironmentConfig(
            name="tiny",
            factors=(
                ContextFactor(
                    id="tv",
                    kind=FactorKind.OBJECT_STATE,
                    instances=("off", "on"),
                    controllable=True,
                ),
                ContextFactor(
                    id="time",
                    kind=FactorKind.TIME,
                    instances=("morning", "evening"),
                    default_instance="morning",
                ),
                ContextFactor(
                    id="location",
                    kind=FactorKind.LOCATION,
                    instances=("sofa", "desk"),
                    default_instance="sofa",
                ),
            ),
        )
    )


@pytest.fixture
def study_env():
    """The eight-factor home: time, location, activity, tv, music, 3 user states."""
    return validate_environment(
        EnvironmentConfig(
            name="apartment",
            factors=(
                ContextFactor(
                    id="time",
                    kind=FactorKind.TIME,
                    instances=("early-morning", "morning", "noon", "afternoon", "evening", "night"),
                    default_instance="morning",
                ),
                ContextFactor(
                    id="location",
                    kind=FactorKind.LOCATION,
                    instances=("sofa", "desk", "dining-table", "kitchen", "bed"),
                ),
                ContextFactor(
                    id="activity",
                    kind=FactorKind.ACTIVITY,
                    instances=("eating", "cooking", "reading", "phone", "exercise"),
                ),
                ContextFactor(
                    id="tv", kind=FactorKind.OBJECT_STATE, instances=("off", "on"), controllable=True
                ),
                ContextFactor(
                    id="music", kind=FactorKind.OBJECT_STATE, instances=("off", "on"), controllable=True
                ),
                ContextFactor(id="is-working", kind=FactorKind.USER_STATE, instances=("working",)),
                ContextFactor(id="is-alone", kind=FactorKind.USER_STATE, instances=("alone",)),
                ContextFactor(id="feel-tired", kind=FactorKind.USER_STATE, instances=("tired",)),
            ),
        )
    )


def make_history(env, rows, days=None):
    """Build a history from raw assignment dicts (factors not listed take defaults)."""
    scenes = []
    for i, row in enumerate(rows):
        assignments = dict(env.default_assignments())
        assignments.update(row)
        day = days[i] if days is not None else None
        scenes.append(ContextScene(seq=i, assignments=assignments, day=day))
    return ContextHistory(env=env, scenes=tuple(scenes))


@pytest.fixture
def history_builder():
    return make_history


def random_environment(rng: random.Random):
    """A small random environment with at least one controllable factor."""
    n_factors = rng.randint(3, 6)
    factors = [
        ContextFactor(
            id="dev",
            kind=FactorKind.OBJECT_STATE,
            instances=("off", "on"),
            controllable=True,
        )
    ]
    kinds = (
        FactorKind.TIME,
        FactorKind.LOCATION,
        FactorKind.ACTIVITY,
        FactorKind.USER_STATE,
        FactorKind.DIGITAL_STATE,
    )
    for i in range(n_factors - 1):
        kind = kinds[rng.randrange(len(kinds))]
        n_inst = rng.randint(2, 4)
        instances = tuple(f"f{i}v{j}" for j in range(n_inst))
        factors.append(
            ContextFactor(
                id=f"f{i}",
                kind=kind,
                instances=instances,
                default_instance=instances[0],
            )
        )
    return validate_environment(
        EnvironmentConfig(name=f"rand-{rng.randrange(1 << 30)}", factors=tuple(factors))
    )


def random_history(env, rng: random.Random, min_scenes=10, max_scenes=60):
    """Random total scenes; guarantees the dev factor shows both labels."""
    n = rng.randint(min_scenes, max_scenes)
    scenes = []
    for seq in range(n):
        assignments = {
            f.id: f.instances[rng.randrange(len(f.instances))] for f in env.factors
        }
        scenes.append(ContextScene(seq=seq, assignments=assignments))
    first = dict(scenes[0].assignments)
    second = dict(scenes[1].assignments)
    first["dev"], second["dev"] = "on", "off"
    scenes[0] = ContextScene(seq=0, assignments=first)
    scenes[1] = ContextScene(seq=1, assignments=second)
    return ContextHistory(env=env, scenes=tuple(scenes))


def random_policy(env, rng: random.Random):
    """Random action on the dev factor plus a random nonempty trigger."""
    action = InstanceRef(factor="dev", instance=rng.choice(("off", "on")))
    candidates = [f for f in env.factors if f.id != "dev"]
    rng.shuffle(candidates)
    n_trigger = rng.randint(1, len(candidates))
    trigger = {}
    for factor in candidates[:n_trigger]:
        k = rng.randint(1, len(factor.instances))
        trigger[factor.id] = tuple(rng.sample(factor.instances, k))
    return validate_policy(
        Policy(id=f"p{rng.randrange(1 << 20)}", action=action, trigger=trigger), env
    )
