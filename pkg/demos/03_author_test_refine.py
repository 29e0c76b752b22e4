"""The full author-test-refine loop on one policy, step by step.

Starts from the classic under-specified draft ("turn on the TV when I'm on
the sofa"), generates unit test cases from the recorded routine, fast-forwards
each one to see what the policy would do, applies the suggested refinements,
and shows the accuracy moving on held-out days.
"""

import capforge as cf
from capforge.presets import studio_environment, studio_initial_policy, studio_routine

env = studio_environment()
history = cf.synthesize_history(studio_routine(days=40, noise=0.0, seed=1), env)
train, holdout = cf.split_history(history, 0.75, seed=1)
print(f"{history.scene_count} scenes: {train.scene_count} for generation, "
      f"{holdout.scene_count} held out for scoring")

policy = studio_initial_policy(env)
print(f"\ndraft policy: when {dict(policy.trigger)} then "
      f"{policy.action.factor}={policy.action.instance}")

before = cf.evaluate(policy, holdout)
print(f"draft accuracy on held-out days: precision {before.precision:.2f} "
      f"recall {before.recall:.2f} F {before.f_score:.2f}")

report = cf.build_report(train, policy.action, env)
config = cf.GenerationConfig(threshold=0.5, seed=1)

round_no = 0
while True:
    round_no += 1
    round_policy = policy  # cases are enacted against the policy they were built for
    suite = cf.generate_suite(round_policy, report, env, config)
    print(f"\n--- validation round {round_no}: {len(suite.cases)} test case(s) ---")
    if not suite.cases:
        print("nothing left to test; the policy is consistent with the history")
        break
    for case in suite.cases:
        scenario = ", ".join(f"{f}={v}" for f, v in case.assignments().items())
        print(f"[{case.id}] condition {int(case.condition)}: imagine {scenario}")
        print(f"    {case.rationale}")
        result = cf.enact(case, round_policy, env)
        print(f"    fast-forward: the TV {'TURNS ON' if result.triggered else 'stays off'}")
        policy = cf.apply_refinement(policy, case, cf.Decision.ADD_SUGGESTED)
        print(f"    accepted → trigger is now {dict(policy.trigger)}")

after = cf.evaluate(policy, holdout)
print(f"\nfinal accuracy: precision {after.precision:.2f} recall {after.recall:.2f} "
      f"F {after.f_score:.2f}   (was F {before.f_score:.2f})")
