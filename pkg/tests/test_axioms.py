"""The axiom battery: built-ins pass, mutants fail, runs are reproducible."""

import json

import pytest

from conflearn import (
    AXIOMS,
    MUTANT_TARGETS,
    CheckConfig,
    ParameterError,
    available_learners,
    check_axiom,
    get_learner,
    get_mutants,
    lift_to_list,
    reports_to_json,
    run_suite,
    suite_passed,
)

FAST = CheckConfig(seed=0, samples=25)


def _fail_ids(reports):
    return {r.axiom_id for r in reports if not r.skipped and not r.passed}


# ---------------------------------------------------------------------------
# Built-in learners pass everything applicable.


@pytest.mark.parametrize("learner_id", list(available_learners()))
def test_built_in_passes_suite(learner_id):
    reports = run_suite(get_learner(learner_id), FAST)
    assert suite_passed(reports), _fail_ids(reports)
    assert [r.axiom_id for r in reports] == list(AXIOMS)


@pytest.mark.parametrize(
    "learner_id", [lid for lid in available_learners() if lid != "kalman"]
)
def test_lifted_learner_passes_suite(learner_id):
    lifted = lift_to_list(get_learner(learner_id))
    reports = run_suite(lifted, FAST)
    assert suite_passed(reports), _fail_ids(reports)


def test_expected_skips_are_skips_not_failures():
    by_id = {
        r.axiom_id: r for r in run_suite(get_learner("kalman"), FAST)
    }
    assert by_id["L2"].skipped  # pair domain has no scalar chart
    by_id = {r.axiom_id: r for r in run_suite(get_learner("ds"), FAST)}
    assert by_id["LB"].skipped  # no registered metric on mass space
    by_id = {r.axiom_id: r for r in run_suite(get_learner("classifier"), FAST)}
    assert by_id["B2"].skipped  # saturated states unreachable at finite params


# ---------------------------------------------------------------------------
# Mutants fail what they are built to fail.


@pytest.mark.parametrize("mutant", get_mutants(), ids=lambda m: m.id)
def test_mutant_fails_its_targets(mutant):
    reports = run_suite(mutant, FAST)
    failed = _fail_ids(reports)
    assert set(MUTANT_TARGETS[mutant.id]) <= failed
    assert failed, "a mutant that fails nothing guards nothing"


def test_every_axiom_caught_by_some_mutant():
    caught = set()
    for mutant in get_mutants():
        caught |= _fail_ids(run_suite(mutant, FAST))
    assert caught == set(AXIOMS)


def test_failed_check_carries_witness():
    mutant = {m.id: m for m in get_mutants()}["mutant-l5-square"]
    report = check_axiom(mutant, "L5", FAST)
    assert not report.passed
    assert report.worst_violation > FAST.tol
    assert report.witness is not None


# ---------------------------------------------------------------------------
# Reproducibility and report wiring.


def test_reports_are_byte_identical_for_same_seed():
    cfg = CheckConfig(seed=12, samples=20)
    a = reports_to_json(run_suite(get_learner("boltzmann"), cfg))
    b = reports_to_json(run_suite(get_learner("boltzmann"), cfg))
    assert a == b
    c = reports_to_json(run_suite(get_learner("boltzmann"), CheckConfig(seed=13, samples=20)))
    assert a != c


def test_report_json_shape():
    reports = run_suite(get_learner("interp"), FAST)
    data = json.loads(reports_to_json(reports))
    assert len(data) == len(AXIOMS)
    for entry in data:
        assert entry["learner_id"] == "interp"
        assert entry["axiom_id"] in AXIOMS
        assert isinstance(entry["passed"], bool)


def test_unknown_axiom_rejected():
    with pytest.raises(ParameterError):
        check_axiom(get_learner("interp"), "L9", FAST)


def test_empty_grid_skips_grid_checks():
    cfg = CheckConfig(seed=0, samples=10, confidence_grid=[])
    by_id = {r.axiom_id: r for r in run_suite(get_learner("interp"), cfg)}
    for axiom_id in ("L3", "L4", "B1"):
        assert by_id[axiom_id].skipped


def test_custom_grid_is_used():
    cfg = CheckConfig(seed=0, samples=10, confidence_grid=[0.0, 0.25, 0.75])
    report = check_axiom(get_learner("interp"), "L4", cfg)
    assert report.passed and not report.skipped
