"""Command-line entry points wrapping the engine.

Every subcommand prints a human-readable table and, with --json-out, also
writes the machine-readable document. CAPFORGE_SEED overrides default seeds.
"""

from __future__ import annotations

import json
import os
import statistics
import sys

import click

from . import __version__
from .association import build_report, report_to_doc
from .engine import evaluate, metrics_to_doc
from .errors import CapforgeError
from .experiment import (
    RefinementMode,
    calibration_to_doc,
    experiment_to_doc,
    format_calibration_table,
    run_calibration,
    run_refinement_experiment,
)
from .history import load_history, split_history
from .model import InstanceRef, dump_json, load_environment, load_policy
from .presets import (
    studio_environment,
    studio_hidden_rule,
    studio_initial_policy,
    studio_routine,
)
from .service import ENV_SEED, create_app
from .testgen import GenerationConfig, enact, generate_suite, suite_from_doc, suite_to_doc


def _default_seed() -> int:
    return int(os.environ.get(ENV_SEED, "0"))


def _write_json(doc, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dump_json(doc))


def _parse_action(text: str) -> InstanceRef:
    factor, _, instance = text.partition("=")
    if not factor or not instance:
        raise click.BadParameter("expected FACTOR=INSTANCE, e.g. tv=on")
    return InstanceRef(factor=factor, instance=instance)


@click.group()
@click.version_option(__version__)
def main():
    """Author, unit-test, and refine context-aware policies."""


@main.command()
@click.option("--env", "env_path", required=True, type=click.Path(exists=True))
@click.option("--history", "history_path", required=True, type=click.Path(exists=True))
@click.option("--action", required=True, help="FACTOR=INSTANCE the analysis targets")
@click.option("--json-out", type=click.Path(), default=None)
def assoc(env_path, history_path, action, json_out):
    """Print uncertainty coefficients and concurrency counts for an action."""
    env = load_environment(env_path)
    history = load_history(history_path, env)
    report = build_report(history, _parse_action(action), env)
    click.echo(f"action {report.action.factor}={report.action.instance}  "
               f"support {report.action_support}/{report.scene_count} scenes")
    click.echo(f"{'factor':<16} {'U':>8}  top co-occurring instances")
    for factor_id, u in report.u_by_factor.items():
        counts = report.concurrency.get(factor_id, {})
        top = ", ".join(f"{v}:{c}" for v, c in
                        sorted(counts.items(), key=lambda kv: -kv[1])[:3])
        click.echo(f"{factor_id:<16} {u:>8.4f}  {top or '-'}")
    _write_json(report_to_doc(report), json_out)


@main.command("eval")
@click.option("--env", "env_path", required=True, type=click.Path(exists=True))
@click.option("--history", "history_path", required=True, type=click.Path(exists=True))
@click.option("--policy", "policy_path", required=True, type=click.Path(exists=True))
@click.option("--split", type=click.Choice(["train", "eval", "all"]), default="all")
@click.option("--train-fraction", type=float, default=0.75, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--json-out", type=click.Path(), default=None)
def eval_cmd(env_path, history_path, policy_path, split, train_fraction, seed, json_out):
    """Score a policy against (a split of) a recorded history."""
    env = load_environment(env_path)
    history = load_history(history_path, env)
    policy = load_policy(policy_path, env)
    seed = _default_seed() if seed is None else seed
    if split != "all":
        train, holdout = split_history(history, train_fraction, seed)
        history = train if split == "train" else holdout
    metrics = evaluate(policy, history)
    click.echo(f"scenes {history.scene_count}  tp {metrics.tp}  fp {metrics.fp}  "
               f"fn {metrics.fn}  tn {metrics.tn}")
    click.echo(f"precision {metrics.precision:.4f}  recall {metrics.recall:.4f}  "
               f"f-score {metrics.f_score:.4f}")
    _write_json(metrics_to_doc(metrics), json_out)


@main.command("gen-tests")
@click.option("--env", "env_path", required=True, type=click.Path(exists=True))
@click.option("--history", "history_path", required=True, type=click.Path(exists=True))
@click.option("--policy", "policy_path", required=True, type=click.Path(exists=True))
@click.option("--threshold", type=float, default=0.5, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--json-out", type=click.Path(), default=None)
def gen_tests(env_path, history_path, policy_path, threshold, seed, json_out):
    """Generate the unit-test suite for a policy from its history."""
    env = load_environment(env_path)
    history = load_history(history_path, env)
    policy = load_policy(policy_path, env)
    seed = _default_seed() if seed is None else seed
    report = build_report(history, policy.action, env)
    suite = generate_suite(policy, report, env, GenerationConfig(threshold, seed))
    click.echo(f"policy {suite.policy_id}: {len(suite.cases)} test case(s) "
               f"(threshold {suite.threshold}, seed {suite.seed})")
    for case in suite.cases:
        scenario = ", ".join(f"{f}={v}" for f, v in case.assignments().items())
        click.echo(f"  [{case.id}] condition {int(case.condition)}: {scenario}")
        click.echo(f"      {case.rationale}")
    _write_json(suite_to_doc(suite), json_out)


@main.command("enact")
@click.option("--env", "env_path", required=True, type=click.Path(exists=True))
@click.option("--policy", "policy_path", required=True, type=click.Path(exists=True))
@click.option("--suite", "suite_path", required=True, type=click.Path(exists=True))
@click.option("--case", "case_id", required=True)
@click.option("--json-out", type=click.Path(), default=None)
def enact_cmd(env_path, policy_path, suite_path, case_id, json_out):
    """Fast-forward one generated case and show whether the action fires."""
    env = load_environment(env_path)
    policy = load_policy(policy_path, env)
    with open(suite_path, "r", encoding="utf-8") as fh:
        suite = suite_from_doc(json.load(fh))
    case = suite.case(case_id)
    if case is None:
        raise click.ClickException(f"suite has no case {case_id!r}")
    result = enact(case, policy, env)
    click.echo(f"{'TRIGGERED' if result.triggered else 'not triggered'}")
    for m in result.matches:
        mark = "ok" if m.matched else "MISS"
        click.echo(f"  {m.factor}: scene={m.actual} selected={list(m.selected)} [{mark}]")
    from .testgen import enactment_to_doc
    _write_json(enactment_to_doc(result), json_out)


@main.command()
@click.option("--env", "env_path", required=True, type=click.Path(exists=True))
@click.option("--history", "history_path", type=click.Path(), default=None,
              help="JSONL scene log; created on first append if missing")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(env_path, history_path, port, host):
    """Run the HTTP service the workbench talks to."""
    import uvicorn

    env = load_environment(env_path)
    history = None
    if history_path and os.path.exists(history_path):
        history = load_history(history_path, env)
    app = create_app(env, history, history_path=history_path)
    uvicorn.run(app, host=host, port=port)


@main.group()
def experiment():
    """Desk-scale reproductions: threshold calibration and scripted refinement."""


@experiment.command()
@click.option("--factors", default="5,10,15,20", show_default=True,
              help="comma-separated factor counts")
@click.option("--scenes", default=None,
              help="comma-separated scene counts (default: 10 x factors per cell)")
@click.option("--threshold", type=float, default=0.5, show_default=True)
@click.option("--noise", type=float, default=0.05, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--json-out", type=click.Path(), default=None)
def calibrate(factors, scenes, threshold, noise, seed, json_out):
    """Sweep factor/scene grids and count factors above the threshold."""
    factor_counts = [int(x) for x in factors.split(",") if x]
    scene_counts = [int(x) for x in scenes.split(",") if x] if scenes else None
    seed = _default_seed() if seed is None else seed
    table = run_calibration(
        factor_counts, scene_counts, threshold=threshold, noise=noise, seed=seed
    )
    click.echo(format_calibration_table(table))
    _write_json(calibration_to_doc(table), json_out)


@experiment.command()
@click.option("--mode", type=click.Choice(["accept-all", "accept-if-consistent", "reject-all"]),
              default="accept-if-consistent", show_default=True)
@click.option("--noise", type=float, default=0.1, show_default=True)
@click.option("--days", type=int, default=40, show_default=True)
@click.option("--seeds", type=int, default=20, show_default=True,
              help="number of seeded runs (seed 0..n-1)")
@click.option("--json-out", type=click.Path(), default=None)
def refine(mode, noise, days, seeds, json_out):
    """Scripted author-test-refine runs on the studio preset."""
    mode_map = {
        "accept-all": RefinementMode.ACCEPT_ALL,
        "accept-if-consistent": RefinementMode.ACCEPT_IF_CONSISTENT,
        "reject-all": RefinementMode.REJECT_ALL,
    }
    env = studio_environment()
    hidden = studio_hidden_rule(env)
    initial = studio_initial_policy(env)
    reports = []
    click.echo(f"{'seed':>4} {'initial F':>10} {'final F':>9} {'gain':>7}  status")
    for seed in range(seeds):
        routine = studio_routine(days=days, noise=noise, seed=seed)
        report = run_refinement_experiment(
            env, routine, hidden, initial, mode_map[mode], seed
        )
        reports.append(report)
        click.echo(f"{seed:>4} {report.initial.f_score:>10.3f} "
                   f"{report.final.f_score:>9.3f} {report.improvement:>+7.3f}  {report.status}")
    gains = [r.improvement for r in reports]
    click.echo(f"median gain {statistics.median(gains):+.3f} over {len(gains)} seed(s)")
    _write_json([experiment_to_doc(r) for r in reports], json_out)


def entry() -> None:
    try:
        main(standalone_mode=True)
    except CapforgeError as exc:  # pragma: no cover - exercised via subprocess
        click.echo(f"error {exc.name}: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    entry()
