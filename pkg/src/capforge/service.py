"""HTTP surface for interactive clients (the workbench) and scripts.

One session = one environment + one history + any number of policies. All
mutations are serialized behind a lock and swap immutable values, so readers
never observe a partially applied edit. Suites are cached per (policy
version, threshold, seed) and invalidated by any policy edit, which is what
makes the client's regenerate-after-refine loop cheap.

Validation failures map to 400 with the engine's error name in the body,
unknown ids to 404, stale suite/report usage to 409.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field

from fastapi import Body, FastAPI, Query, Request
from fastapi.responses import JSONResponse

from . import history as hist
from .association import build_report, report_to_doc
from .engine import evaluate, metrics_to_doc
from .errors import CapforgeError, ConflictError, PolicyMismatch
from .model import (
    Environment,
    ValidatedPolicy,
    environment_to_doc,
    policy_from_doc,
    policy_to_doc,
    validate_policy,
)
from .testgen import (
    Decision,
    GenerationConfig,
    TestCase,
    TestSuite,
    apply_refinement,
    enact,
    enactment_to_doc,
    generate_suite,
    suite_to_doc,
)

ENV_SEED = "CAPFORGE_SEED"

BLUE, PINK, RED = "Blue", "Pink", "Red"


def display_states(
    env: Environment,
    policy: ValidatedPolicy | None,
    case: TestCase | None,
) -> dict[str, dict[str, str]]:
    """Color every instance: Red in the displayed case, Pink in the active
    trigger, Blue otherwise (Red wins over Pink). Pure: clients re-derive
    this and contract tests assert equality."""
    in_case = set()
    if case is not None:
        in_case = {(f, v) for f, v in case.assignments().items()}
    in_trigger = set()
    if policy is not None:
        in_trigger = {(f, v) for f, vs in policy.trigger.items() for v in vs}
    states: dict[str, dict[str, str]] = {}
    for factor in env.factors:
        row = {}
        for v in factor.instances:
            if (factor.id, v) in in_case:
                row[v] = RED
            elif (factor.id, v) in in_trigger:
                row[v] = PINK
            else:
                row[v] = BLUE
        states[factor.id] = row
    return states


@dataclass
class _PolicyRecord:
    policy: ValidatedPolicy
    version: int = 0
    order: int = 0  # creation order (listing order)


@dataclass
class SessionState:
    env: Environment
    history: hist.ContextHistory
    history_path: str | None = None
    default_seed: int = 0
    policies: dict[str, _PolicyRecord] = field(default_factory=dict)
    active_policy_id: str | None = None
    active_case: TestCase | None = None
    suites: dict[tuple[str, int, float, int], TestSuite] = field(default_factory=dict)
    lock: threading.RLock = field(default_factory=threading.RLock)
    _created: int = 0

    def record(self, policy_id: str) -> _PolicyRecord:
        try:
            return self.policies[policy_id]
        except KeyError:
            raise _NotFound(f"unknown policy {policy_id!r}") from None

    def invalidate(self, policy_id: str) -> None:
        self.suites = {k: v for k, v in self.suites.items() if k[0] != policy_id}
        if self.active_case is not None and self.active_case.policy_id == policy_id:
            self.active_case = None

    def persist_scene(self, scene) -> None:
        if self.history_path:
            with open(self.history_path, "a", encoding="utf-8") as fh:
                fh.write(hist.scene_to_line(scene) + "\n")


class _NotFound(Exception):
    pass


def create_app(
    env: Environment,
    history: hist.ContextHistory | None = None,
    *,
    history_path: str | None = None,
    default_seed: int | None = None,
) -> FastAPI:
    if default_seed is None:
        default_seed = int(os.environ.get(ENV_SEED, "0"))
    state = SessionState(
        env=env,
        history=history if history is not None else hist.ContextHistory(env=env),
        history_path=history_path,
        default_seed=default_seed,
    )
    app = FastAPI(title="capforge", version="0.1.0")
    app.state.session = state

    @app.exception_handler(CapforgeError)
    async def _engine_error(request: Request, exc: CapforgeError):
        status = 409 if isinstance(exc, ConflictError) else 400
        return JSONResponse(status_code=status, content={"error": exc.name, "detail": str(exc)})

    @app.exception_handler(_NotFound)
    async def _not_found(request: Request, exc: _NotFound):
        return JSONResponse(status_code=404, content={"error": "NotFound", "detail": str(exc)})

    # --- environment -----------------------------------------------------

    @app.get("/environment")
    def get_environment():
        return environment_to_doc(state.env)

    @app.get("/environment/states")
    def get_states():
        with state.lock:
            policy = (
                state.policies[state.active_policy_id].policy
                if state.active_policy_id in state.policies
                else None
            )
            return display_states(state.env, policy, state.active_case)

    # --- history -----------------------------------------------------------

    @app.get("/history")
    def get_history():
        return hist.history_to_doc(state.history)

    @app.post("/history/scenes")
    def post_scene(partial: dict = Body(...)):
        with state.lock:
            before = state.history
            state.history = hist.append_scene(before, partial)
            appended = state.history is not before
            scene = state.history.scenes[-1]
            if appended:
                state.persist_scene(scene)
            return {
                "appended": appended,
                "scene": hist.scene_to_doc(scene),
                "scene_count": state.history.scene_count,
            }

    @app.post("/history/days")
    def post_day():
        with state.lock:
            state.history = hist.new_day(state.history)
            return {"day": state.history.active_day}

    @app.post("/history/synthesize")
    def post_synthesize(doc: dict = Body(...)):
        spec = hist.routine_from_doc(doc)
        with state.lock:
            extra = hist.synthesize_history(spec, state.env)
            state.history = hist.concat_histories(state.history, extra)
            if state.history_path:
                hist.save_history(state.history, state.history_path)
            return {"added": extra.scene_count, "scene_count": state.history.scene_count}

    # --- policies -------------------------------------------------------------

    @app.get("/policies")
    def list_policies():
        with state.lock:
            ordered = sorted(state.policies.values(), key=lambda r: r.order)
            return {"policies": [policy_to_doc(r.policy) for r in ordered]}

    @app.post("/policies", status_code=201)
    def create_policy(doc: dict = Body(...)):
        policy = validate_policy(policy_from_doc(doc), state.env)
        with state.lock:
            if policy.id in state.policies:
                raise PolicyMismatch(f"policy {policy.id!r} already exists; use PUT")
            state.policies[policy.id] = _PolicyRecord(
                policy=policy, version=0, order=state._created
            )
            state._created += 1
            state.active_policy_id = policy.id
            return policy_to_doc(policy)

    @app.get("/policies/{policy_id}")
    def get_policy(policy_id: str):
        with state.lock:
            return policy_to_doc(state.record(policy_id).policy)

    @app.put("/policies/{policy_id}")
    def put_policy(policy_id: str, doc: dict = Body(...)):
        raw = policy_from_doc({**doc, "id": policy_id})
        policy = validate_policy(raw, state.env)
        with state.lock:
            record = state.record(policy_id)
            record.policy = policy
            record.version += 1
            state.invalidate(policy_id)
            state.active_policy_id = policy_id
            return policy_to_doc(policy)

    @app.delete("/policies/{policy_id}")
    def delete_policy(policy_id: str):
        with state.lock:
            state.record(policy_id)
            del state.policies[policy_id]
            state.invalidate(policy_id)
            if state.active_policy_id == policy_id:
                state.active_policy_id = None
            return {"deleted": policy_id}

    # --- analytics and validation ------------------------------------------------

    @app.post("/policies/{policy_id}/report")
    def policy_report(policy_id: str):
        with state.lock:
            record = state.record(policy_id)
            report = build_report(state.history, record.policy.action, state.env)
            return report_to_doc(report)

    @app.post("/policies/{policy_id}/suite")
    def policy_suite(
        policy_id: str,
        threshold: float = Query(0.5),
        seed: int | None = Query(None),
    ):
        with state.lock:
            record = state.record(policy_id)
            seed = state.default_seed if seed is None else seed
            key = (policy_id, record.version, threshold, seed)
            suite = state.suites.get(key)
            if suite is None:
                report = build_report(state.history, record.policy.action, state.env)
                config = GenerationConfig(threshold=threshold, seed=seed)
                suite = generate_suite(record.policy, report, state.env, config)
                state.suites[key] = suite
            state.active_policy_id = policy_id
            return suite_to_doc(suite)

    def _find_case(policy_id: str, case_id: str) -> tuple[_PolicyRecord, TestCase]:
        record = state.record(policy_id)
        for (pid, version, _, _), suite in state.suites.items():
            if pid != policy_id:
                continue
            case = suite.case(case_id)
            if case is None:
                continue
            if version != record.version:
                raise PolicyMismatch(
                    f"case {case_id!r} belongs to an older version of {policy_id!r}; "
                    "regenerate the suite"
                )
            return record, case
        raise _NotFound(f"no generated suite for {policy_id!r} contains case {case_id!r}")

    @app.post("/policies/{policy_id}/cases/{case_id}/enact")
    def enact_case(policy_id: str, case_id: str):
        with state.lock:
            record, case = _find_case(policy_id, case_id)
            result = enact(case, record.policy, state.env)
            state.active_policy_id = policy_id
            state.active_case = case
            return enactment_to_doc(result)

    @app.post("/policies/{policy_id}/cases/{case_id}/refine")
    def refine_case(policy_id: str, case_id: str, body: dict = Body(...)):
        with state.lock:
            record, case = _find_case(policy_id, case_id)
            try:
                decision = Decision(body.get("decision"))
            except ValueError:
                return JSONResponse(
                    status_code=400,
                    content={
                        "error": "UnknownDecision",
                        "detail": f"decision must be one of {[d.value for d in Decision]}",
                    },
                )
            refined = apply_refinement(record.policy, case, decision)
            record.policy = refined
            record.version += 1
            state.invalidate(policy_id)
            state.active_policy_id = policy_id
            return policy_to_doc(refined)

    @app.post("/policies/{policy_id}/metrics")
    def policy_metrics(policy_id: str, body: dict = Body(default={})):
        split = body.get("split", "eval")
        seed = body.get("seed", state.default_seed)
        train_fraction = body.get("train_fraction", 0.75)
        with state.lock:
            record = state.record(policy_id)
            history = state.history
            if split in ("train", "eval"):
                train, evaluation = hist.split_history(history, train_fraction, seed)
                history = train if split == "train" else evaluation
            elif split != "all":
                return JSONResponse(
                    status_code=400,
                    content={"error": "UnknownSplit", "detail": "split must be train, eval, or all"},
                )
            return metrics_to_doc(evaluate(record.policy, history))

    return app
