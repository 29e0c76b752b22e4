"""Context model: factors, environments, scenes, and trigger-action policies.

An environment declares the universe of context factors and their nominal
instances. A scene assigns exactly one instance to every factor. A policy
(CAP) pairs one action instance on a controllable factor with a trigger that
selects instance sets on other factors. Everything here is an immutable value
after validation and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Mapping

from .errors import (
    ActionFactorInTrigger,
    ActionNotControllable,
    AnchorKindMismatch,
    BadDefault,
    ControllableKindMismatch,
    DuplicateFactorId,
    DuplicateInstanceId,
    EmptyInstanceSet,
    EmptyTrigger,
    MalformedDocument,
    NoControllableFactor,
    UnknownFactor,
    UnknownInstance,
)

#: Reserved instance auto-added to location/activity/user-state factors that
#: declare no default ("nothing is happening here right now").
RESERVED_NONE = "none"

#: Default nominal vocabulary for Time factors (configurable per environment).
TIME_VOCABULARY = ("early-morning", "morning", "noon", "afternoon", "evening", "night")


class FactorKind(str, Enum):
    TIME = "Time"
    LOCATION = "Location"
    ACTIVITY = "Activity"
    USER_STATE = "UserState"
    OBJECT_STATE = "ObjectState"
    DIGITAL_STATE = "DigitalState"


#: Kinds that may carry a floorplan anchor.
ANCHORED_KINDS = frozenset(
    {FactorKind.LOCATION, FactorKind.ACTIVITY, FactorKind.OBJECT_STATE}
)

#: Kinds whose missing default becomes the reserved "none" instance.
NONE_DEFAULT_KINDS = frozenset(
    {FactorKind.LOCATION, FactorKind.ACTIVITY, FactorKind.USER_STATE}
)

#: Kinds whose missing default becomes the first listed ("off"-like) instance.
FIRST_DEFAULT_KINDS = frozenset({FactorKind.OBJECT_STATE, FactorKind.DIGITAL_STATE})


@dataclass(frozen=True)
class ContextFactor:
    """One detectable category of context and its nominal instances.

    ``default_instance`` may be omitted in raw configs; validation resolves it
    by kind (see :func:`validate_environment`). ``anchor`` is a normalized
    (x, y) floorplan coordinate for spatially-sensitive kinds.
    """

    id: str
    kind: FactorKind
    instances: tuple[str, ...]
    default_instance: str | None = None
    controllable: bool = False
    anchor: tuple[float, float] | None = None


@dataclass(frozen=True)
class EnvironmentConfig:
    """Raw, not-yet-validated environment description."""

    name: str
    factors: tuple[ContextFactor, ...]


@dataclass(frozen=True)
class Environment:
    """Validated environment with frozen factor and instance iteration order.

    Construct via :func:`validate_environment`; all defaults are resolved and
    all invariants hold. Lookup tables are derived lazily and cached.
    """

    name: str
    factors: tuple[ContextFactor, ...]

    @cached_property
    def _by_id(self) -> dict[str, ContextFactor]:
        return {f.id: f for f in self.factors}

    @cached_property
    def _instance_pos(self) -> dict[str, dict[str, int]]:
        return {f.id: {v: i for i, v in enumerate(f.instances)} for f in self.factors}

    @property
    def factor_ids(self) -> tuple[str, ...]:
        return tuple(f.id for f in self.factors)

    def factor(self, factor_id: str) -> ContextFactor:
        try:
            return self._by_id[factor_id]
        except KeyError:
            raise UnknownFactor(f"unknown context factor {factor_id!r}") from None

    def instances(self, factor_id: str) -> tuple[str, ...]:
        return self.factor(factor_id).instances

    def require_instance(self, factor_id: str, instance_id: str) -> None:
        if instance_id not in self._instance_pos[self.factor(factor_id).id]:
            raise UnknownInstance(
                f"factor {factor_id!r} has no instance {instance_id!r}"
            )

    def instance_position(self, factor_id: str, instance_id: str) -> int:
        """Frozen position of an instance within its factor (tie-break order)."""
        self.require_instance(factor_id, instance_id)
        return self._instance_pos[factor_id][instance_id]

    def default_assignments(self) -> dict[str, str]:
        return {f.id: f.default_instance for f in self.factors}  # type: ignore[misc]

    def controllable_factors(self) -> tuple[str, ...]:
        return tuple(f.id for f in self.factors if f.controllable)

    def time_factor(self) -> ContextFactor | None:
        """The first Time-kind factor, if the environment has one."""
        for f in self.factors:
            if f.kind is FactorKind.TIME:
                return f
        return None

    def config(self) -> EnvironmentConfig:
        return EnvironmentConfig(name=self.name, factors=self.factors)


def validate_environment(raw: EnvironmentConfig) -> Environment:
    """Check every environment invariant and resolve omitted defaults.

    Raises exactly one of DuplicateFactorId, DuplicateInstanceId,
    EmptyInstanceSet, BadDefault, ControllableKindMismatch,
    AnchorKindMismatch, NoControllableFactor; the message names the
    offending factor.
    """
    seen: set[str] = set()
    resolved: list[ContextFactor] = []
    for f in raw.factors:
        if f.id in seen:
            raise DuplicateFactorId(f"duplicate factor id {f.id!r}")
        seen.add(f.id)
        instances = tuple(f.instances)
        if not instances:
            raise EmptyInstanceSet(f"factor {f.id!r} declares no instances")
        if len(set(instances)) != len(instances):
            raise DuplicateInstanceId(f"factor {f.id!r} repeats an instance id")
        if f.controllable and f.kind is not FactorKind.OBJECT_STATE:
            raise ControllableKindMismatch(
                f"factor {f.id!r} is controllable but of kind {f.kind.value}"
            )
        if f.anchor is not None and f.kind not in ANCHORED_KINDS:
            raise AnchorKindMismatch(
                f"factor {f.id!r} of kind {f.kind.value} cannot carry an anchor"
            )
        default = f.default_instance
        if default is not None:
            if default not in instances:
                raise BadDefault(
                    f"factor {f.id!r} default {default!r} is not one of its instances"
                )
        elif f.kind in FIRST_DEFAULT_KINDS:
            default = instances[0]
        elif f.kind in NONE_DEFAULT_KINDS:
            if RESERVED_NONE not in instances:
                instances = instances + (RESERVED_NONE,)
            default = RESERVED_NONE
        else:  # Time is never inferred; the recorder always supplies a clock value
            raise BadDefault(
                f"factor {f.id!r} of kind {f.kind.value} needs an explicit default_instance"
            )
        resolved.append(
            ContextFactor(
                id=f.id,
                kind=f.kind,
                instances=instances,
                default_instance=default,
                controllable=f.controllable,
                anchor=f.anchor,
            )
        )
    if not any(f.controllable for f in resolved):
        raise NoControllableFactor(
            f"environment {raw.name!r} has no controllable factor; no action can be authored"
        )
    return Environment(name=raw.name, factors=tuple(resolved))


@dataclass(frozen=True)
class ContextScene:
    """One complete snapshot: exactly one instance per environment factor."""

    seq: int
    assignments: Mapping[str, str]
    day: int | None = None


def normalize_scene(
    partial: Mapping[str, str],
    env: Environment,
    seq: int,
    day: int | None = None,
) -> ContextScene:
    """Complete a partial assignment into a total scene.

    Unspecified factors take their default instance. Idempotent on total
    assignments. Raises UnknownFactor/UnknownInstance on bad keys or values.
    """
    for factor_id, instance_id in partial.items():
        env.require_instance(factor_id, instance_id)
    assignments = {
        f.id: partial.get(f.id, f.default_instance) for f in env.factors
    }
    return ContextScene(seq=seq, assignments=assignments, day=day)


@dataclass(frozen=True)
class InstanceRef:
    """A (factor, instance) pair, e.g. a policy's action or a suggestion."""

    factor: str
    instance: str


@dataclass(frozen=True)
class Policy:
    """Raw trigger-action policy as authored; validate before evaluating."""

    id: str
    action: InstanceRef
    trigger: Mapping[str, Iterable[str]]


@dataclass(frozen=True)
class ValidatedPolicy:
    """Policy with all invariants checked and trigger order frozen.

    Within a factor the selected instances are disjunctive (any one matches);
    across factors the trigger is conjunctive (all factors must match).
    """

    id: str
    action: InstanceRef
    trigger: Mapping[str, tuple[str, ...]]
    env: Environment = field(repr=False)

    @property
    def trigger_factors(self) -> tuple[str, ...]:
        return tuple(self.trigger.keys())

    def raw(self) -> Policy:
        return Policy(id=self.id, action=self.action, trigger=dict(self.trigger))


def validate_policy(policy: Policy, env: Environment) -> ValidatedPolicy:
    """Check policy invariants against an environment, freezing factor order.

    Raises EmptyTrigger, ActionNotControllable, ActionFactorInTrigger,
    UnknownFactor or UnknownInstance.
    """
    action = policy.action
    action_factor = env.factor(action.factor)
    env.require_instance(action.factor, action.instance)
    if not action_factor.controllable:
        raise ActionNotControllable(
            f"action factor {action.factor!r} is not controllable"
        )
    if not policy.trigger:
        raise EmptyTrigger(f"policy {policy.id!r} has an empty trigger")
    for factor_id in policy.trigger:
        env.factor(factor_id)  # raises UnknownFactor
    if action.factor in policy.trigger:
        raise ActionFactorInTrigger(
            f"policy {policy.id!r} references its action factor {action.factor!r} in the trigger"
        )
    trigger: dict[str, tuple[str, ...]] = {}
    for factor in env.factors:
        if factor.id not in policy.trigger:
            continue
        selected = set(policy.trigger[factor.id])
        if not selected:
            raise EmptyTrigger(
                f"policy {policy.id!r} selects no instances for factor {factor.id!r}"
            )
        for instance_id in selected:
            env.require_instance(factor.id, instance_id)
        trigger[factor.id] = tuple(v for v in factor.instances if v in selected)
    return ValidatedPolicy(id=policy.id, action=action, trigger=trigger, env=env)


# --- document codecs ----------------------------------------------------------
#
# Canonical JSON: two-space indent, insertion key order, trailing newline.
# Iteration order everywhere follows the environment's frozen factor and
# instance order, so encodings are byte-stable.


def dump_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _require(doc: Mapping[str, Any], key: str, context: str) -> Any:
    try:
        return doc[key]
    except (KeyError, TypeError):
        raise MalformedDocument(f"{context} is missing field {key!r}") from None


def factor_to_doc(factor: ContextFactor) -> dict:
    return {
        "id": factor.id,
        "kind": factor.kind.value,
        "instances": list(factor.instances),
        "default_instance": factor.default_instance,
        "controllable": factor.controllable,
        "anchor": list(factor.anchor) if factor.anchor is not None else None,
    }


def factor_from_doc(doc: Mapping[str, Any]) -> ContextFactor:
    kind_name = _require(doc, "kind", "factor")
    try:
        kind = FactorKind(kind_name)
    except ValueError:
        raise MalformedDocument(f"unknown factor kind {kind_name!r}") from None
    anchor = doc.get("anchor")
    if anchor is not None:
        if not isinstance(anchor, (list, tuple)) or len(anchor) != 2:
            raise MalformedDocument("anchor must be a [x, y] pair")
        anchor = (float(anchor[0]), float(anchor[1]))
    return ContextFactor(
        id=_require(doc, "id", "factor"),
        kind=kind,
        instances=tuple(_require(doc, "instances", "factor")),
        default_instance=doc.get("default_instance"),
        controllable=bool(doc.get("controllable", False)),
        anchor=anchor,
    )


def environment_to_doc(env: Environment | EnvironmentConfig) -> dict:
    return {
        "name": env.name,
        "factors": [factor_to_doc(f) for f in env.factors],
    }


def environment_from_doc(doc: Mapping[str, Any]) -> EnvironmentConfig:
    factors = _require(doc, "factors", "environment")
    return EnvironmentConfig(
        name=_require(doc, "name", "environment"),
        factors=tuple(factor_from_doc(f) for f in factors),
    )


def load_environment(path) -> Environment:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return validate_environment(environment_from_doc(doc))


def save_environment(env: Environment | EnvironmentConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(environment_to_doc(env)))


def scene_to_doc(scene: ContextScene) -> dict:
    doc: dict[str, Any] = {"seq": scene.seq}
    if scene.day is not None:
        doc["day"] = scene.day
    doc["assignments"] = dict(scene.assignments)
    return doc


def scene_from_doc(doc: Mapping[str, Any]) -> ContextScene:
    return ContextScene(
        seq=int(_require(doc, "seq", "scene")),
        assignments=dict(_require(doc, "assignments", "scene")),
        day=doc.get("day"),
    )


def instance_ref_to_doc(ref: InstanceRef) -> dict:
    return {"factor": ref.factor, "instance": ref.instance}


def instance_ref_from_doc(doc: Mapping[str, Any]) -> InstanceRef:
    return InstanceRef(
        factor=_require(doc, "factor", "instance ref"),
        instance=_require(doc, "instance", "instance ref"),
    )


def policy_to_doc(policy: Policy | ValidatedPolicy) -> dict:
    return {
        "id": policy.id,
        "action": instance_ref_to_doc(policy.action),
        "trigger": {f: list(vs) for f, vs in policy.trigger.items()},
    }


def policy_from_doc(doc: Mapping[str, Any]) -> Policy:
    trigger = _require(doc, "trigger", "policy")
    if not isinstance(trigger, Mapping):
        raise MalformedDocument("policy trigger must be a factor → instances map")
    return Policy(
        id=_require(doc, "id", "policy"),
        action=instance_ref_from_doc(_require(doc, "action", "policy")),
        trigger={f: tuple(vs) for f, vs in trigger.items()},
    )


def load_policy(path, env: Environment) -> ValidatedPolicy:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return validate_policy(policy_from_doc(doc), env)
