import math

import pytest

from twostate.errors import ValidationError
from twostate.reporting import stable_json
from twostate.scenarios import REGISTRY, counterfactual_reference_case, get_scenario

EXPECTED_SCENARIOS = [
    "epr_product_rule",
    "n_box",
    "n_spin_single_system",
    "negative_kinetic_energy",
    "spin_cone",
    "spin_xi_weak",
    "three_box",
    "time_machine",
]


def test_registry_contents():
    assert sorted(REGISTRY) == EXPECTED_SCENARIOS
    with pytest.raises(ValidationError):
        get_scenario("does_not_exist")


@pytest.mark.parametrize("name", EXPECTED_SCENARIOS)
def test_every_scenario_passes_its_own_checks(name):
    result = get_scenario(name).run(seed=0)
    assert result.passed, [n for n, ok in result.checks if not ok]
    assert result.summary_line.startswith(name)
    # result payload serializes deterministically
    assert stable_json(result.to_dict()) == stable_json(result.to_dict())


@pytest.mark.parametrize("name", EXPECTED_SCENARIOS)
def test_scenarios_are_deterministic_given_a_seed(name):
    a = get_scenario(name).run(seed=3)
    b = get_scenario(name).run(seed=3)
    assert stable_json(a.to_dict()) == stable_json(b.to_dict())
    for filename, text in a.tables.items():
        assert b.tables[filename] == text


def test_three_box_default_results():
    result = get_scenario("three_box").run(seed=0)
    res = result.results
    assert res["prob_box1"] == pytest.approx(1.0, abs=1e-12)
    assert res["prob_box2"] == pytest.approx(1.0, abs=1e-12)
    assert res["joint_product_certain"] == 0.0
    assert res["weak_values"]["P3"][0] == pytest.approx(-1.0, abs=1e-12)
    assert res["pressure_weak_values"]["N3"] == pytest.approx(-5.0, abs=1e-10)
    assert res["prob_both_boxes_empty"] == pytest.approx(0.2, abs=1e-12)


def test_three_box_linearity_fallback_for_large_ensembles():
    result = get_scenario("three_box").run({"n_particles": 40}, seed=0)
    assert result.results["pressure_weak_values"]["N3"] == pytest.approx(-40.0, abs=1e-9)


def test_n_box_grows_with_the_box_count():
    result = get_scenario("n_box").run({"boxes": 10}, seed=0)
    assert len(result.results["prob_per_box"]) == 9
    assert max(abs(p - 1.0) for p in result.results["prob_per_box"]) <= 1e-10


def test_epr_reports_the_failure_pattern():
    res = get_scenario("epr_product_rule").run(seed=0).results
    assert res["product_rule"]["a_certain"] == -1.0
    assert res["product_rule"]["b_certain"] == -1.0
    assert res["product_rule"]["ab_certain"] == -1.0
    assert res["product_rule"]["product_rule_holds"] is False
    assert res["backward_only_max_deviation"] <= 1e-12


def test_spin_xi_weak_figures_and_seeding():
    post = get_scenario("spin_xi_weak").run(seed=0)
    assert post.results["figure"] == "fig3e"
    assert "fig3e.csv" in post.tables
    assert abs(post.results["pointer"]["peak"] - math.sqrt(2)) <= 0.05
    other_seed = get_scenario("spin_xi_weak").run(seed=1)
    assert other_seed.results["ensemble"]["mean"] != post.results["ensemble"]["mean"]

    pre = get_scenario("spin_xi_weak").run({"postselect": "false"}, seed=0)
    assert pre.results["figure"] == "fig2b"
    assert abs(pre.results["pointer"]["mean"] - 1 / math.sqrt(2)) <= 0.02

    strong = get_scenario("spin_xi_weak").run({"postselect": "false", "delta": 0.1}, seed=0)
    assert strong.results["figure"] == "fig2a"


def test_n_spin_scenario_cross_checks_small_systems():
    result = get_scenario("n_spin_single_system").run({"spins": 6}, seed=0)
    assert result.results["tensor_oracle_max_deviation"] <= 1e-10
    default = get_scenario("n_spin_single_system").run(seed=0)
    assert default.results["tensor_oracle_max_deviation"] is None
    assert "fig4.csv" in default.tables


def test_negative_kinetic_energy_scenario_values():
    result = get_scenario("negative_kinetic_energy").run(seed=0)
    res = result.results
    assert res["ground_energy"] < 0
    assert abs(res["kinetic_weak_value"] - res["ground_energy"]) <= 1e-10
    assert res["kinetic_weak_value_inside_well"] == pytest.approx(
        res["ground_energy"] + 5.0, abs=1e-8
    )
    assert res["pointer_mean"] < 0
    with pytest.raises(ValidationError):
        get_scenario("negative_kinetic_energy").run({"postselect_x": 0.5}, seed=0)


def test_spin_cone_scenario_records_the_angle_discrepancy():
    result = get_scenario("spin_cone").run(seed=0)
    res = result.results
    assert res["prob_at_derived_angle"] >= 1.0 - 1e-10
    assert res["printed_angle_agrees"] is False
    assert res["theta_printed_four_arctan"] == pytest.approx(2 * res["theta_derived"])
    degenerate = get_scenario("spin_cone").run({"chi": math.pi / 4}, seed=0)
    assert degenerate.results["directions_found"] == 0


def test_time_machine_scenario_consistency():
    result = get_scenario("time_machine").run(seed=0)
    res = result.results
    assert "fig5.csv" in result.tables
    assert res["net_shift"] == pytest.approx(10.0)
    assert res["log10_success_prob"] < -25
    assert res["amplitude_decay_per_step"] == pytest.approx(1 / 19, rel=0.05)
    # a visually faithful configuration: modest distortion at width 6
    assert res["distortion"] < 0.1


def test_unknown_parameter_is_rejected():
    with pytest.raises(ValidationError):
        get_scenario("three_box").run({"bogus": 1}, seed=0)
    with pytest.raises(ValidationError):
        get_scenario("n_box").run({"boxes": "many"}, seed=0)


def test_counterfactual_reference_case_shape():
    report = counterfactual_reference_case()
    assert report.deviation_with <= 1e-12
    assert report.deviation_without == pytest.approx(0.25, abs=1e-12)
