import pytest

from capforge.errors import (
    ActionFactorInTrigger,
    ActionNotControllable,
    AnchorKindMismatch,
    BadDefault,
    ControllableKindMismatch,
    DuplicateFactorId,
    DuplicateInstanceId,
    EmptyInstanceSet,
    EmptyTrigger,
    NoControllableFactor,
    UnknownFactor,
    UnknownInstance,
)
from capforge.model import (
    RESERVED_NONE,
    ContextFactor,
    EnvironmentConfig,
    FactorKind,
    InstanceRef,
    Policy,
    environment_from_doc,
    environment_to_doc,
    normalize_scene,
    policy_from_doc,
    policy_to_doc,
    scene_from_doc,
    scene_to_doc,
    validate_environment,
    validate_policy,
)


def factor(fid, kind, instances, **kw):
    return ContextFactor(id=fid, kind=kind, instances=tuple(instances), **kw)


class TestEnvironmentValidation:
    def test_minimal_config_valid(self, tiny_env):
        assert tiny_env.factor_ids == ("tv", "time", "location")
        assert tiny_env.factor("tv").default_instance == "off"

    def test_study_scale_environment_valid(self, study_env):
        assert len(study_env.factors) == 8
        assert set(study_env.controllable_factors()) == {"tv", "music"}

    def test_bad_default_names_factor(self):
        cfg = EnvironmentConfig(
            name="bad",
            factors=(
                factor("tv", FactorKind.OBJECT_STATE, ["on", "off"],
                       default_instance="standby", controllable=True),
            ),
        )
        with pytest.raises(BadDefault, match="tv"):
            validate_environment(cfg)

    def test_duplicate_factor_id(self):
        f = factor("tv", FactorKind.OBJECT_STATE, ["off", "on"], controllable=True)
        with pytest.raises(DuplicateFactorId, match="tv"):
            validate_environment(EnvironmentConfig(name="d", factors=(f, f)))

    def test_duplicate_instance_id(self):
        cfg = EnvironmentConfig(
            name="d",
            factors=(factor("tv", FactorKind.OBJECT_STATE, ["on", "on"], controllable=True),),
        )
        with pytest.raises(DuplicateInstanceId, match="tv"):
            validate_environment(cfg)

    def test_empty_instance_set(self):
        cfg = EnvironmentConfig(
            name="e", factors=(factor("tv", FactorKind.OBJECT_STATE, [], controllable=True),)
        )
        with pytest.raises(EmptyInstanceSet, match="tv"):
            validate_environment(cfg)

    def test_no_controllable_factor(self):
        cfg = EnvironmentConfig(
            name="n",
            factors=(factor("time", FactorKind.TIME, ["m", "e"], default_instance="m"),),
        )
        with pytest.raises(NoControllableFactor):
            validate_environment(cfg)

    def test_controllable_requires_object_state(self):
        cfg = EnvironmentConfig(
            name="c",
            factors=(factor("time", FactorKind.TIME, ["m"], default_instance="m", controllable=True),),
        )
        with pytest.raises(ControllableKindMismatch, match="time"):
            validate_environment(cfg)

    def test_anchor_only_on_spatial_kinds(self):
        cfg = EnvironmentConfig(
            name="a",
            factors=(
                factor("tv", FactorKind.OBJECT_STATE, ["off", "on"], controllable=True),
                factor("time", FactorKind.TIME, ["m"], default_instance="m", anchor=(0.1, 0.2)),
            ),
        )
        with pytest.raises(AnchorKindMismatch, match="time"):
            validate_environment(cfg)

    def test_default_inference_by_kind(self):
        env = validate_environment(
            EnvironmentConfig(
                name="defaults",
                factors=(
                    factor("tv", FactorKind.OBJECT_STATE, ["off", "on"], controllable=True),
                    factor("weather", FactorKind.DIGITAL_STATE, ["sunny", "rain"]),
                    factor("location", FactorKind.LOCATION, ["sofa", "desk"]),
                    factor("activity", FactorKind.ACTIVITY, ["eating"]),
                    factor("time", FactorKind.TIME, ["m", "e"], default_instance="e"),
                ),
            )
        )
        assert env.factor("tv").default_instance == "off"
        assert env.factor("weather").default_instance == "sunny"
        # location/activity gain the reserved none instance
        assert env.factor("location").instances == ("sofa", "desk", RESERVED_NONE)
        assert env.factor("location").default_instance == RESERVED_NONE
        assert env.factor("activity").default_instance == RESERVED_NONE
        assert env.factor("time").default_instance == "e"

    def test_time_default_never_inferred(self):
        cfg = EnvironmentConfig(
            name="t",
            factors=(
                factor("tv", FactorKind.OBJECT_STATE, ["off", "on"], controllable=True),
                factor("time", FactorKind.TIME, ["m", "e"]),
            ),
        )
        with pytest.raises(BadDefault, match="time"):
            validate_environment(cfg)


class TestNormalizeScene:
    def test_empty_partial_gets_all_defaults(self, tiny_env):
        scene = normalize_scene({}, tiny_env, seq=0)
        assert scene.assignments == {"tv": "off", "time": "morning", "location": "sofa"}

    def test_partial_keeps_given_and_fills_rest(self, study_env):
        scene = normalize_scene({"location": "sofa", "activity": "eating"}, study_env, seq=3)
        assert scene.assignments["location"] == "sofa"
        assert scene.assignments["activity"] == "eating"
        assert scene.assignments["tv"] == "off"
        assert scene.assignments["is-working"] == RESERVED_NONE
        assert len(scene.assignments) == len(study_env.factors)

    def test_unknown_instance(self, tiny_env):
        with pytest.raises(UnknownInstance, match="balcony"):
            normalize_scene({"location": "balcony"}, tiny_env, seq=0)

    def test_unknown_factor(self, tiny_env):
        with pytest.raises(UnknownFactor, match="humidity"):
            normalize_scene({"humidity": "high"}, tiny_env, seq=0)

    def test_idempotent_on_total_assignment(self, tiny_env):
        total = normalize_scene({"tv": "on", "time": "evening", "location": "desk"}, tiny_env, seq=1)
        again = normalize_scene(total.assignments, tiny_env, seq=1)
        assert again == total


class TestPolicyValidation:
    def test_sofa_tv_policy_valid(self, tiny_env):
        p = validate_policy(
            Policy(id="p", action=InstanceRef("tv", "on"), trigger={"location": ("sofa",)}),
            tiny_env,
        )
        assert p.trigger == {"location": ("sofa",)}

    def test_action_factor_in_trigger(self, tiny_env):
        with pytest.raises(ActionFactorInTrigger):
            validate_policy(
                Policy(id="p", action=InstanceRef("tv", "on"), trigger={"tv": ("off",)}),
                tiny_env,
            )

    def test_action_not_controllable(self, tiny_env):
        with pytest.raises(ActionNotControllable, match="time"):
            validate_policy(
                Policy(id="p", action=InstanceRef("time", "evening"),
                       trigger={"location": ("sofa",)}),
                tiny_env,
            )

    def test_empty_trigger(self, tiny_env):
        with pytest.raises(EmptyTrigger):
            validate_policy(Policy(id="p", action=InstanceRef("tv", "on"), trigger={}), tiny_env)

    def test_empty_selection_for_factor(self, tiny_env):
        with pytest.raises(EmptyTrigger, match="location"):
            validate_policy(
                Policy(id="p", action=InstanceRef("tv", "on"), trigger={"location": ()}),
                tiny_env,
            )

    def test_unknown_trigger_instance(self, tiny_env):
        with pytest.raises(UnknownInstance):
            validate_policy(
                Policy(id="p", action=InstanceRef("tv", "on"), trigger={"location": ("garden",)}),
                tiny_env,
            )

    def test_trigger_order_frozen_to_environment(self, study_env):
        p = validate_policy(
            Policy(
                id="p",
                action=InstanceRef("tv", "on"),
                trigger={"music": ("off",), "activity": ("reading", "eating"), "location": ("sofa",)},
            ),
            study_env,
        )
        assert list(p.trigger) == ["location", "activity", "music"]
        assert p.trigger["activity"] == ("eating", "reading")


class TestRoundTrips:
    def test_environment_doc_round_trip(self, study_env):
        doc = environment_to_doc(study_env)
        decoded = environment_from_doc(doc)
        assert decoded == study_env.config()
        assert validate_environment(decoded) == study_env

    def test_scene_doc_round_trip(self, tiny_env):
        scene = normalize_scene({"tv": "on"}, tiny_env, seq=4, day=2)
        assert scene_from_doc(scene_to_doc(scene)) == scene

    def test_scene_doc_omits_missing_day(self, tiny_env):
        scene = normalize_scene({}, tiny_env, seq=0)
        assert "day" not in scene_to_doc(scene)

    def test_policy_doc_round_trip(self, study_env):
        p = validate_policy(
            Policy(id="p", action=InstanceRef("tv", "on"),
                   trigger={"location": ("sofa",), "activity": ("eating",)}),
            study_env,
        )
        decoded = policy_from_doc(policy_to_doc(p))
        assert validate_policy(decoded, study_env) == p
