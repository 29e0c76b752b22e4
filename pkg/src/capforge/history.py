"""Context-history recording, persistence, splitting, and routine synthesis.

A history is an append-only log of scenes, registered whenever some factor
changes. Scenes may carry an optional day marker emitted by the recorder's
new-day action; day markers drive the train/eval splitter. The on-disk format
is JSON Lines, one scene per line, so appends stream.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from typing import Any, Iterable, Mapping

from .errors import HistoryTooSmall, MalformedDocument, UnknownFactor
from .model import (
    ContextScene,
    Environment,
    normalize_scene,
    scene_from_doc,
    scene_to_doc,
)


@dataclass(frozen=True)
class ContextHistory:
    """Ordered scene log bound to the environment it was recorded against."""

    env: Environment
    scenes: tuple[ContextScene, ...] = ()
    active_day: int | None = None  # day stamped onto subsequently appended scenes

    @property
    def env_ref(self) -> str:
        return self.env.name

    @property
    def scene_count(self) -> int:
        return len(self.scenes)


@dataclass(frozen=True)
class SizeVerdict:
    """Outcome of the minimum-history-size check (10 scenes per factor)."""

    ok: bool
    required: int
    actual: int


def new_day(history: ContextHistory) -> ContextHistory:
    """Open a new day: scenes appended from now on carry the next day index."""
    last_day = history.active_day
    if last_day is None and history.scenes:
        last_day = history.scenes[-1].day
    next_day = 0 if last_day is None else last_day + 1
    return replace(history, active_day=next_day)


def append_scene(history: ContextHistory, partial: Mapping[str, str]) -> ContextHistory:
    """Normalize and append one scene; identical consecutive scenes collapse.

    Registration is change-triggered: if the normalized assignment equals the
    previous scene's assignment the history is returned unchanged, so
    redundant recorder snapshots cost nothing.
    """
    next_seq = history.scenes[-1].seq + 1 if history.scenes else 0
    day = history.active_day
    if day is None and history.scenes:
        day = history.scenes[-1].day
    scene = normalize_scene(partial, history.env, seq=next_seq, day=day)
    if history.scenes and history.scenes[-1].assignments == scene.assignments:
        return history
    return replace(history, scenes=history.scenes + (scene,))


def check_minimum_size(history: ContextHistory, env: Environment | None = None) -> SizeVerdict:
    """Verdict on whether the history is big enough to trust the analytics."""
    env = env or history.env
    required = 10 * len(env.factors)
    actual = len(history.scenes)
    return SizeVerdict(ok=actual >= required, required=required, actual=actual)


def split_history(
    history: ContextHistory, train_fraction: float, seed: int
) -> tuple[ContextHistory, ContextHistory]:
    """Partition a history into disjoint train/eval histories.

    When every scene carries a day marker (and more than one day exists), the
    train side is the contiguous prefix of whole days whose cumulative scene
    count lands closest to the fraction, which avoids leaking intra-day
    correlation. Otherwise eval scenes are sampled one per contiguous block of
    the timeline (seeded), keeping both sides spread over time. Deterministic
    given (history, fraction, seed).
    """
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    scenes = history.scenes
    n = len(scenes)
    if n < 2:
        raise HistoryTooSmall(f"cannot split a history of {n} scene(s)")

    days_marked = all(s.day is not None for s in scenes)
    if days_marked:
        boundaries: list[int] = []  # index just past each day's last scene
        for i in range(1, n):
            if scenes[i].day != scenes[i - 1].day:
                boundaries.append(i)
        if boundaries:
            target = train_fraction * n
            cut = min(boundaries, key=lambda b: (abs(b - target), b))
            train, evaluation = scenes[:cut], scenes[cut:]
            return (
                replace(history, scenes=train, active_day=None),
                replace(history, scenes=evaluation, active_day=None),
            )
        # single-day history: fall through to the scene-level path

    train_size = int(train_fraction * n)
    if train_size < 1 or train_size > n - 1:
        raise HistoryTooSmall(
            f"{n} scenes cannot be split {train_fraction:.0%}/{1 - train_fraction:.0%} "
            "with both sides nonempty"
        )
    eval_size = n - train_size
    rng = random.Random(seed)
    picked: list[int] = []
    start = 0
    for block in range(eval_size):
        stop = start + (n - start) // (eval_size - block)
        picked.append(rng.randrange(start, stop))
        start = stop
    eval_set = set(picked)
    train = tuple(s for i, s in enumerate(scenes) if i not in eval_set)
    evaluation = tuple(s for i, s in enumerate(scenes) if i in eval_set)
    return (
        replace(history, scenes=train, active_day=None),
        replace(history, scenes=evaluation, active_day=None),
    )


# --- synthetic routines ---------------------------------------------------------


@dataclass(frozen=True)
class RoutineBlock:
    """One slot of a day: a time instance plus weighted candidate assignments."""

    time_instance: str
    options: tuple[tuple[float, Mapping[str, str]], ...]


@dataclass(frozen=True)
class RoutineSpec:
    """Seeded generator spec standing in for a human-elicited history."""

    blocks: tuple[RoutineBlock, ...]
    days: int
    noise: float
    seed: int


def _validate_routine(spec: RoutineSpec, env: Environment) -> str:
    """Check the spec against the environment; returns the time factor id."""
    if spec.days < 1:
        raise MalformedDocument("routine needs at least one day")
    if not 0.0 <= spec.noise <= 1.0:
        raise MalformedDocument("routine noise must lie in [0, 1]")
    if not spec.blocks:
        raise MalformedDocument("routine declares no blocks")
    time_factor = env.time_factor()
    if time_factor is None:
        raise UnknownFactor("routine blocks need a Time-kind factor in the environment")
    for block in spec.blocks:
        env.require_instance(time_factor.id, block.time_instance)
        if not block.options:
            raise MalformedDocument(
                f"routine block at {block.time_instance!r} has no options"
            )
        for weight, assign in block.options:
            if weight <= 0:
                raise MalformedDocument("routine option weights must be positive")
            for factor_id, instance_id in assign.items():
                env.require_instance(factor_id, instance_id)
    return time_factor.id


def synthesize_history(spec: RoutineSpec, env: Environment) -> ContextHistory:
    """Generate a seeded history: one scene per (day, block).

    Per scene: draw one option by weight, anchor the time factor at the
    block's instance, fill the rest with defaults, then independently redraw
    every factor slot to a uniformly random legal instance with probability
    ``spec.noise``. No consecutive-duplicate collapsing: the scene count is
    exactly ``days × len(blocks)``.
    """
    time_factor = _validate_routine(spec, env)
    rng = random.Random(spec.seed)
    defaults = env.default_assignments()
    scenes: list[ContextScene] = []
    seq = 0
    for day in range(spec.days):
        for block in spec.blocks:
            weights = [w for w, _ in block.options]
            _, drawn = rng.choices(block.options, weights=weights)[0]
            assignment = dict(defaults)
            assignment[time_factor] = block.time_instance
            assignment.update(drawn)
            for factor in env.factors:
                if rng.random() < spec.noise:
                    assignment[factor.id] = rng.choice(factor.instances)
            scenes.append(normalize_scene(assignment, env, seq=seq, day=day))
            seq += 1
    return ContextHistory(env=env, scenes=tuple(scenes))


def concat_histories(base: ContextHistory, extra: ContextHistory) -> ContextHistory:
    """Append another history's scenes, renumbering seq and day to continue."""
    if extra.env.name != base.env.name:
        raise UnknownFactor(
            f"cannot concatenate histories from {extra.env.name!r} onto {base.env.name!r}"
        )
    next_seq = base.scenes[-1].seq + 1 if base.scenes else 0
    last_day = base.scenes[-1].day if base.scenes else None
    day_offset = 0 if last_day is None else last_day + 1
    merged = list(base.scenes)
    for scene in extra.scenes:
        day = scene.day if scene.day is None else scene.day + day_offset
        merged.append(ContextScene(seq=next_seq, assignments=scene.assignments, day=day))
        next_seq += 1
    return replace(base, scenes=tuple(merged), active_day=None)


# --- persistence ---------------------------------------------------------------


def scene_to_line(scene: ContextScene) -> str:
    return json.dumps(scene_to_doc(scene), ensure_ascii=False)


def save_history(history: ContextHistory, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for scene in history.scenes:
            fh.write(scene_to_line(scene) + "\n")


def load_history(path, env: Environment) -> ContextHistory:
    """Read a JSON Lines scene log, validating every line against the env."""
    scenes: list[ContextScene] = []
    last_seq = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = scene_from_doc(json.loads(line))
            except json.JSONDecodeError as exc:
                raise MalformedDocument(f"{path}:{lineno}: {exc}") from None
            if last_seq is not None and raw.seq <= last_seq:
                raise MalformedDocument(
                    f"{path}:{lineno}: seq {raw.seq} does not increase"
                )
            last_seq = raw.seq
            scenes.append(
                normalize_scene(raw.assignments, env, seq=raw.seq, day=raw.day)
            )
    return ContextHistory(env=env, scenes=tuple(scenes))


def history_to_doc(history: ContextHistory) -> dict:
    return {
        "env_ref": history.env_ref,
        "scene_count": len(history.scenes),
        "scenes": [scene_to_doc(s) for s in history.scenes],
    }


def routine_to_doc(spec: RoutineSpec) -> dict:
    return {
        "blocks": [
            {
                "time": block.time_instance,
                "options": [
                    {"weight": weight, "assign": dict(assign)}
                    for weight, assign in block.options
                ],
            }
            for block in spec.blocks
        ],
        "days": spec.days,
        "noise": spec.noise,
        "seed": spec.seed,
    }


def routine_from_doc(doc: Mapping[str, Any]) -> RoutineSpec:
    try:
        blocks = tuple(
            RoutineBlock(
                time_instance=block["time"],
                options=tuple(
                    (float(opt["weight"]), dict(opt["assign"]))
                    for opt in block["options"]
                ),
            )
            for block in doc["blocks"]
        )
        return RoutineSpec(
            blocks=blocks,
            days=int(doc["days"]),
            noise=float(doc["noise"]),
            seed=int(doc["seed"]),
        )
    except (KeyError, TypeError) as exc:
        raise MalformedDocument(f"routine document: {exc}") from None
