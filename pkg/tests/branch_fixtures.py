"""Hand-built fixtures, one per assessment branch, plus their expected suites.

All numbers were derived on paper from the 8-10 scene histories below:

* Branch 1 (correlated factor missing from the trigger): eating appears in
  exactly the four tv-on scenes (U = 1), the trigger only has location, and
  time's on-rate is equal across both values (U = 0). Location itself sits
  in the trigger with U ≈ 0.43 and no positive-count unselected instance,
  so it composes nothing. Expected: one case suggesting (activity, eating)
  with the forced filler location=sofa.

* Branch 2 (uncorrelated factor inside the trigger): every factor has
  on-rate 1/2 in each of its classes (all U = 0); only time is in the
  trigger, selected {evening}. The sole unselected positive-count instance
  is morning (count 2). Expected: one case suggesting (time, morning).

* Branch 3 (correlated factor whose busier instance was left out): location
  determines most of the action (U = 0.8); the trigger selects dining-table
  (concurrency 1) while sofa co-occurs 4 times. Expected: one case
  suggesting (location, sofa).

* Branch 4 (uncorrelated, unselected): the branch-2 history with a
  {sofa, desk} location trigger. Time and activity are uncorrelated and
  unselected (no case); location is uncorrelated and in the trigger but the
  unselected instances all have zero counts. Expected: empty suite.

The expected documents in EXPECTED_SUITES are built from these derivations,
not from the generator, and the golden files are written from them.
"""

from capforge.model import (
    ContextFactor,
    EnvironmentConfig,
    FactorKind,
    InstanceRef,
    Policy,
    validate_environment,
    validate_policy,
)

from conftest import make_history


def branch_environment():
    return validate_environment(
        EnvironmentConfig(
            name="branch",
            factors=(
                ContextFactor(
                    id="time",
                    kind=FactorKind.TIME,
                    instances=("morning", "evening"),
                    default_instance="morning",
                ),
                ContextFactor(
                    id="location",
                    kind=FactorKind.LOCATION,
                    instances=("sofa", "desk", "dining-table"),
                ),
                ContextFactor(
                    id="activity",
                    kind=FactorKind.ACTIVITY,
                    instances=("eating", "reading"),
                ),
                ContextFactor(
                    id="tv",
                    kind=FactorKind.OBJECT_STATE,
                    instances=("off", "on"),
                    controllable=True,
                ),
            ),
        )
    )


def _rows(table):
    return [
        {"time": t, "location": l, "activity": a, "tv": tv}
        for t, l, a, tv in table
    ]


# eating <=> tv on; time balanced; location weakly associated (in trigger)
BRANCH1_ROWS = _rows([
    ("morning", "desk", "reading", "off"),
    ("morning", "sofa", "eating", "on"),
    ("evening", "sofa", "eating", "on"),
    ("evening", "desk", "reading", "off"),
    ("morning", "sofa", "reading", "off"),
    ("evening", "sofa", "eating", "on"),
    ("morning", "desk", "reading", "off"),
    ("evening", "sofa", "reading", "off"),
    ("morning", "sofa", "eating", "on"),
    ("evening", "desk", "reading", "off"),
])

# every factor independent of the action (each class has on-rate 1/2)
BRANCH2_ROWS = _rows([
    ("morning", "sofa", "eating", "on"),
    ("morning", "sofa", "eating", "off"),
    ("evening", "sofa", "reading", "on"),
    ("evening", "sofa", "reading", "off"),
    ("morning", "desk", "reading", "on"),
    ("morning", "desk", "reading", "off"),
    ("evening", "desk", "eating", "on"),
    ("evening", "desk", "eating", "off"),
])

# location dominates; sofa hosts 4 of 5 on-scenes, dining-table just 1
BRANCH3_ROWS = _rows([
    ("morning", "sofa", "eating", "on"),
    ("evening", "sofa", "reading", "on"),
    ("morning", "sofa", "reading", "on"),
    ("evening", "sofa", "eating", "on"),
    ("morning", "dining-table", "eating", "on"),
    ("evening", "dining-table", "reading", "off"),
    ("morning", "desk", "reading", "off"),
    ("evening", "desk", "eating", "off"),
    ("morning", "desk", "reading", "off"),
    ("evening", "desk", "eating", "off"),
])

ACTION = InstanceRef(factor="tv", instance="on")


def branch_fixture(branch: int):
    """(env, history, validated policy) for one branch fixture."""
    env = branch_environment()
    if branch == 1:
        rows, trigger, pid = BRANCH1_ROWS, {"location": ("sofa",)}, "tv-when-sofa"
    elif branch == 2:
        rows, trigger, pid = BRANCH2_ROWS, {"time": ("evening",)}, "tv-evening"
    elif branch == 3:
        rows, trigger, pid = BRANCH3_ROWS, {"location": ("dining-table",)}, "tv-at-table"
    elif branch == 4:
        rows, trigger, pid = BRANCH2_ROWS, {"location": ("sofa", "desk")}, "tv-seating"
    else:
        raise ValueError(branch)
    history = make_history(env, rows)
    policy = validate_policy(Policy(id=pid, action=ACTION, trigger=trigger), env)
    return env, history, policy


EXPECTED_SUITES = {
    1: {
        "policy_id": "tv-when-sofa",
        "threshold": 0.5,
        "seed": 0,
        "cases": [
            {
                "id": "case-activity",
                "policy_id": "tv-when-sofa",
                "focus_factor": "activity",
                "condition": 1,
                "suggested": {"factor": "activity", "instance": "eating"},
                "fillers": {"location": "sofa"},
                "rationale": (
                    "activity is usually 'eating' when tv is 'on', "
                    "but the trigger ignores activity."
                ),
            }
        ],
    },
    2: {
        "policy_id": "tv-evening",
        "threshold": 0.5,
        "seed": 0,
        "cases": [
            {
                "id": "case-time",
                "policy_id": "tv-evening",
                "focus_factor": "time",
                "condition": 2,
                "suggested": {"factor": "time", "instance": "morning"},
                "fillers": {},
                "rationale": (
                    "The trigger requires time, yet time='morning' "
                    "rarely coincides with tv='on'."
                ),
            }
        ],
    },
    3: {
        "policy_id": "tv-at-table",
        "threshold": 0.5,
        "seed": 0,
        "cases": [
            {
                "id": "case-location",
                "policy_id": "tv-at-table",
                "focus_factor": "location",
                "condition": 3,
                "suggested": {"factor": "location", "instance": "sofa"},
                "fillers": {},
                "rationale": (
                    "location='sofa' coincides with tv='on' more often "
                    "than any selected location instance."
                ),
            }
        ],
    },
    4: {
        "policy_id": "tv-seating",
        "threshold": 0.5,
        "seed": 0,
        "cases": [],
    },
}
