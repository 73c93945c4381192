import csv
import json
import math

import pytest
from openpyxl import load_workbook

from hr_rigidity import __version__
from hr_rigidity.config import RunConfig
from hr_rigidity.exceptions import ReportError
from hr_rigidity.records import check_inequality, check_residual, failed, skipped, tally
from hr_rigidity.report import CSV_COLUMNS, XLSX_COLUMNS, build_report, number, summarize, write_report

TIMESTAMP = "2024-01-01T00:00:00+00:00"

@pytest.fixture
def records():
    return [
        check_residual("symfun.generating", "n=2", 1e-15, 0.0, 1e-12),
        check_residual("symfun.generating", "n=3", 0.1, 0.0, 1e-12),
        check_inequality("rigidity.proof_chain", (0.5, 1.0), -1.0, 2.0, 0.0),
        skipped("hypersurface.walter", (0.5, 1.0), "skipped-degenerate"),
        failed("hypersurface.point_geometry", (1.0, 2.0), "LinAlgError: singular"),
    ]

def config_for(tmp_path, **kwargs):
    return RunConfig(output=str(tmp_path / "salida" / "reporte.json"), **kwargs)

def test_number_encoding():
    assert number(0.1) == 0.1
    assert number(math.nan) == "nan"
    assert number(math.inf) == "inf"
    assert number(-math.inf) == "-inf"

def test_summary_counts_match_records(records):
    summary = summarize(records)
    counts = tally(records)
    assert (summary["pass"], summary["fail"], summary["skipped"]) == (counts["pass"], counts["fail"], counts["skipped"])
    assert summary["pass"] + summary["fail"] + summary["skipped"] == len(records)
    worst = summary["max_abs_residual_per_check"]
    assert worst["symfun.generating"] == pytest.approx(0.1)
    assert worst["hypersurface.point_geometry"] == "nan"
    assert "hypersurface.walter" not in worst

def test_zero_records_report():
    report = build_report([], RunConfig(), timestamp=TIMESTAMP)
    assert report["records"] == []
    assert report["summary"] == {"pass": 0, "fail": 0, "skipped": 0, "max_abs_residual_per_check": {}}
    assert report["meta"]["version"] == __version__

def test_meta_carries_tolerances_and_overrides():
    config = RunConfig(seed=5, tolerances={"walter": 1e-6})
    meta = build_report([], config, details={"rigidity": {"margin": math.nan}}, caveats=["nota"], timestamp=TIMESTAMP)["meta"]
    assert meta["seed"] == 5
    assert meta["tolerances"]["walter"] == 1e-6
    assert meta["tolerance_overrides"] == {"walter": 1e-6}
    assert meta["caveats"] == ["nota"]
    assert meta["details"]["rigidity"]["margin"] == "nan"
    assert meta["timestamp"] == TIMESTAMP

def test_json_report_has_no_nan_literals(tmp_path, records):
    paths = write_report(records, config_for(tmp_path), timestamp=TIMESTAMP)
    assert len(paths) == 1
    text = paths[0].read_text(encoding="utf-8")
    assert "NaN" not in text
    data = json.loads(text)
    assert data["records"][4]["residual"] == "nan"
    assert data["records"][0]["lhs"] == 1e-15
    assert list(data) == ["meta", "summary", "records"]

def test_records_are_byte_identical_for_fixed_inputs(tmp_path, records):
    first = write_report(records, config_for(tmp_path), timestamp=TIMESTAMP)[0].read_bytes()
    second = write_report(records, config_for(tmp_path), timestamp=TIMESTAMP)[0].read_bytes()
    assert first == second

def test_csv_export(tmp_path, records):
    paths = write_report(records, config_for(tmp_path, format="json+csv"), timestamp=TIMESTAMP)
    assert paths[1].suffix == ".csv"
    with paths[1].open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == len(records) + 1
    assert rows[1][2] == format(1e-15, ".17g")
    assert rows[5][4] == "nan"

def test_xlsx_export(tmp_path, records):
    paths = write_report(records, config_for(tmp_path, format="json+xlsx"), timestamp=TIMESTAMP)
    workbook = load_workbook(paths[1])
    assert workbook.sheetnames == ["summary", "records"]
    sheet = workbook["records"]
    header = [cell.value for cell in sheet[1]]
    assert tuple(header) == XLSX_COLUMNS
    assert sheet.max_row == len(records) + 1
    assert sheet.cell(row=2, column=1).value == "symfun.generating"

def test_unwritable_path_raises_report_error(tmp_path):
    blocker = tmp_path / "archivo"
    blocker.write_text("x")
    config = RunConfig(output=str(blocker / "reporte.json"))
    with pytest.raises(ReportError):
        write_report([], config, timestamp=TIMESTAMP)
