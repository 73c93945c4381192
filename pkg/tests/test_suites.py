import numpy as np
import pytest

from hr_rigidity import suites
from hr_rigidity.config import RunConfig, Tolerances
from hr_rigidity.exceptions import GeometryError
from hr_rigidity.records import Verdict
from hr_rigidity.rigidity import GRID_CAVEAT, RIGID, TRUNCATED_CAVEAT
from hr_rigidity.suites import SuiteOutcome, acceptance_sweep, guarded, run_suites

def failures(outcome):
    return [record for record in outcome.records if record.verdict == Verdict.FAIL]

def ids(outcome):
    return {record.check_id for record in outcome.records}

def test_guarded_turns_numeric_errors_into_failures():
    def broken():
        raise GeometryError("métrica degenerada")

    records = guarded("demo.check", (1.0, 2.0), broken)
    assert len(records) == 1
    assert records[0].verdict == Verdict.FAIL
    assert "GeometryError" in records[0].note

def test_guarded_lets_programming_errors_through():
    def broken():
        raise KeyError("x")

    with pytest.raises(KeyError):
        guarded("demo.check", 0, broken)

def test_outcome_merge_keeps_caveats_unique():
    first = SuiteOutcome(caveats=["a"])
    first.merge(SuiteOutcome(caveats=["a", "b"], details={"k": 1}))
    assert first.caveats == ["a", "b"]
    assert first.details == {"k": 1}

def test_cones_suite_small_budget():
    outcome = run_suites(RunConfig(suite="cones", samples=40, seed=3))
    assert failures(outcome) == []
    assert {"cones.hyperbolicity", "cones.garding", "cones.nesting"} <= ids(outcome)
    assert outcome.caveats == []

def test_spaceform_suite():
    outcome = run_suites(RunConfig(suite="spaceform", samples=50, seed=2))
    assert failures(outcome) == []
    assert {"spaceform.membership", "spaceform.geodesic_sphere", "spaceform.mu_limit"} <= ids(outcome)

@pytest.mark.parametrize("family, c", [("ellipsoid", 0.0), ("bump", 1.0), ("bump", -1.0)])
def test_walter_suite_on_non_umbilic_families(family, c):
    outcome = run_suites(RunConfig(suite="walter", family=family, c=c, grid=[8], samples=10))
    assert failures(outcome) == []
    walter = [record for record in outcome.records if record.check_id == "hypersurface.walter"]
    assert sum(record.verdict == Verdict.PASS for record in walter) > len(walter) // 2
    assert outcome.caveats == [GRID_CAVEAT]

def test_walter_suite_on_cylinder_is_truncated():
    outcome = run_suites(RunConfig(suite="walter", family="cylinder", grid=[8], r=1, samples=10))
    assert TRUNCATED_CAVEAT in outcome.caveats
    assert failures(outcome) == []

def test_rigidity_suite_on_sphere():
    outcome = run_suites(RunConfig(suite="rigidity", family="sphere", c=-1.0, grid=[8], samples=10))
    details = outcome.details["rigidity"]
    assert details["verdict"] == RIGID
    assert details["elliptic_point_found"]
    assert set(details["scaling"]["slopes"]) == {"deficit", "H_range", "H2_range"}
    assert np.isfinite(details["margin"])
    assert failures(outcome) == []
    assert outcome.caveats == [GRID_CAVEAT]

def test_acceptance_sweep_counts_non_degenerate_points():
    outcome = acceptance_sweep(Tolerances(), seed=5, points=10, budget=6, commutation_budget=6)
    counts = outcome.details["acceptance"]
    assert len(counts) == 4
    assert any("n=3" in label for label in counts)
    assert all(entry["walter"] >= 6 and entry["commutation"] == 10 for entry in counts.values())
    assert failures(outcome) == []
    assert {"hypersurface.walter", "hypersurface.gradient_identity", "hypersurface.commutation"} <= ids(outcome)

def test_acceptance_sweep_fails_below_budget():
    outcome = acceptance_sweep(Tolerances(), seed=5, points=2, budget=3, commutation_budget=1)
    shortfalls = [rec for rec in failures(outcome) if rec.check_id == "hypersurface.acceptance_count"]
    assert len(shortfalls) == 4
    assert not any(rec.check_id == "hypersurface.acceptance_commutation_count" for rec in failures(outcome))

def test_suite_all_runs_acceptance_sweep(monkeypatch):
    calls = []
    for name in suites.SUITE_ORDER:
        monkeypatch.setitem(suites.SUITES, name, lambda config, tol: SuiteOutcome())

    def sweep(tol, seed):
        calls.append(seed)
        return SuiteOutcome(details={"acceptance": {}})

    monkeypatch.setattr(suites, "acceptance_sweep", sweep)
    outcome = run_suites(RunConfig(suite="all", seed=11))
    assert calls == [11]
    assert "acceptance" in outcome.details
    run_suites(RunConfig(suite="walter"))
    assert calls == [11]
