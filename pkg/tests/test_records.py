import math

import numpy as np
import pytest

from hr_rigidity.records import (
    Verdict,
    aggregate,
    check_inequality,
    check_residual,
    failed,
    format_location,
    skipped,
    tally,
)

def test_residual_within_tolerance_passes():
    record = check_residual("demo.check", (0.5, 1.25), 1.0, 1.0 + 1e-10, 1e-9)
    assert record.verdict == Verdict.PASS
    assert record.residual == pytest.approx(1e-10)
    assert record.location == "(0.5, 1.25)"

def test_custom_residual_is_absolute():
    record = check_residual("demo.check", "x", 3.0, 2.0, 0.5, residual=-0.25)
    assert record.verdict == Verdict.PASS
    assert record.residual == 0.25

def test_non_finite_values_fail():
    for lhs in (math.nan, math.inf):
        record = check_residual("demo.check", "x", lhs, 0.0, 1.0)
        assert record.verdict == Verdict.FAIL
        assert "no finito" in record.note
    assert check_inequality("demo.check", "x", 0.0, math.nan, 1.0).verdict == Verdict.FAIL

def test_inequality_slack():
    assert check_inequality("demo.le", 0, 1.0, 2.0, 0.0).verdict == Verdict.PASS
    record = check_inequality("demo.le", 0, 2.0, 1.5, 0.1)
    assert record.verdict == Verdict.FAIL
    assert record.residual == pytest.approx(0.5)

def test_skipped_and_failed_records():
    omitted = skipped("demo.check", "x", "skipped-degenerate")
    assert omitted.verdict == Verdict.SKIPPED
    assert omitted.note == "skipped-degenerate"
    broken = failed("demo.check", np.array([1.0, 2.0]), "LinAlgError")
    assert broken.verdict == Verdict.FAIL
    assert math.isnan(broken.residual)

def test_format_location_variants():
    assert format_location("c=1") == "c=1"
    assert format_location(7) == "7"
    assert format_location([1.0, 1e-7]) == "(1, 1e-07)"

def test_tally_counts_verdicts():
    records = [
        check_residual("a", 0, 0.0, 0.0, 1.0),
        check_residual("a", 1, 0.0, 5.0, 1.0),
        skipped("b", 0, "nota"),
    ]
    assert tally(records) == {"pass": 1, "fail": 1, "skipped": 1}

def test_aggregate_keeps_worst_case_in_first_seen_order():
    records = [
        check_residual("b", 0, 0.0, 0.1, 1.0),
        check_residual("a", 0, 0.0, 0.2, 1.0),
        check_residual("b", 1, 0.0, 0.9, 1.0),
        skipped("c", 0, "nota"),
    ]
    summary = aggregate(records)
    assert [record.check_id for record in summary] == ["b", "a", "c"]
    assert summary[0].residual == pytest.approx(0.9)
    assert summary[0].note.startswith("evaluados=2, fallidos=0, omitidos=0")
    assert summary[2].verdict == Verdict.SKIPPED

def test_aggregate_prefers_failures():
    records = [check_residual("a", 0, 0.0, 0.5, 1.0), check_residual("a", 1, 0.0, 3.0, 1.0)]
    assert aggregate(records)[0].verdict == Verdict.FAIL

def test_to_dict_keys():
    entry = check_residual("a", 0, 1.0, 1.0, 1e-9).to_dict()
    assert list(entry) == ["check_id", "location", "lhs", "rhs", "residual", "tolerance", "verdict", "note"]
    assert entry["verdict"] == "PASS"
