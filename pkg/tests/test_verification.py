import time

import pytest

from toda_cells import verification
from toda_cells.lie import root_datum
from toda_cells.utils import Settings
from toda_cells.verification import (
    CRITERIA,
    Criterion,
    braid_relations_hold,
    check_divisor_counts,
    check_homology_a2_a3,
    check_tau_systems,
    pdw_duality_holds,
    run_suite,
)


def test_criteria_names_are_unique():
    names = [c.name for c in CRITERIA]
    assert len(names) == len(set(names))


@pytest.mark.parametrize("check", [check_homology_a2_a3, check_divisor_counts, check_tau_systems])
def test_cheap_criteria_pass(check):
    measured, expected, passed = check(Settings())
    assert passed, f"measured {measured}, expected {expected}"


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("C", 4), ("D", 4), ("G", 2)])
def test_duality_on_signs(family, rank):
    assert pdw_duality_holds(root_datum(family, rank))


@pytest.mark.parametrize("family,rank", [("A", 4), ("B", 3), ("F", 4), ("G", 2), ("E", 6)])
def test_braid_relations(family, rank):
    assert braid_relations_hold(root_datum(family, rank))


def test_run_suite_records_in_order():
    tally = run_suite(Settings(), only=["divisor-components", "homology-a2-a3"])
    assert [r.name for r in tally.results] == ["homology-a2-a3", "divisor-components"]
    assert tally.ok


def test_quick_suite_skips_budgeted():
    tally = run_suite(Settings(), suite="quick", only=["betti-e7", "duality-a7-a8"])
    assert [r.status for r in tally.results] == ["SKIP", "SKIP"]
    assert tally.ok


def test_expired_budget_skips_budgeted():
    tally = run_suite(Settings(budget_seconds=0), only=["z2-homology-e7"])
    assert tally.lines() == ["SKIP z2-homology-e7: measured=budget expected="]


@pytest.mark.slow
def test_full_suite_passes():
    tally = run_suite(Settings(budget_seconds=3600))
    assert tally.ok, tally.lines()


def test_budget_starts_with_first_budgeted_criterion(monkeypatch):
    def slow(settings):
        time.sleep(0.6)
        return "done", "done", True

    def instant(settings):
        return "done", "done", True

    monkeypatch.setattr(
        verification,
        "CRITERIA",
        (Criterion("slow", slow), Criterion("budgeted", instant, budgeted=True)),
    )
    tally = run_suite(Settings(budget_seconds=0.3))
    assert [r.status for r in tally.results] == ["PASS", "PASS"]
