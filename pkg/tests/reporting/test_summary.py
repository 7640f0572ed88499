"""
Integration tests for the run summary.
"""

import pandas as pd
import pytest

from src.lsvrand.core.pipeline.manifest import FitSummary, RunManifest
from src.lsvrand.core.pipeline.writer import ResultWriter
from src.lsvrand.errors import AcceptanceError, ManifestIntegrityError
from src.lsvrand.reporting import format_table, generate_report, summarize_fits


@pytest.fixture
def run_dir(temp_output_dir):
    """Output directory with one recorded command and three fits."""
    output_dir = str(temp_output_dir)
    writer = ResultWriter(output_dir, subdir="decay")
    writer.write_frame("decay_L1", pd.DataFrame({"n": [1, 2], "value": [0.5, 0.125]}))
    manifest = RunManifest(config_hash="0123456789abcdef")
    manifest.record("decay", "2026-01-01T00:00:00+00:00", output_dir, writer.written, 1, 1)
    manifest.add_fit(FitSummary("decay_L1", -2.9, -3.0, 0.2, True, "decay"))
    manifest.add_fit(FitSummary("duality", 1.3, 4.0, 0.0, True, "corr"))
    manifest.add_fit(FitSummary("density_defect", 0.01, command="density"))
    manifest.save(output_dir)
    return temp_output_dir


def fail_one(run_dir):
    manifest = RunManifest.load(str(run_dir))
    manifest.add_fit(FitSummary("variance_operator", 0.4, 0.25, 0.01, False, "variance"))
    manifest.save(str(run_dir))


def test_summarize_sorts_by_command(run_dir):
    table = summarize_fits(RunManifest.load(str(run_dir)))
    assert table["name"].tolist() == ["duality", "decay_L1", "density_defect"]
    assert list(table.columns) == ["name", "command", "value", "predicted", "tolerance", "pass"]


def test_summarize_empty_manifest():
    table = summarize_fits(RunManifest(config_hash="x"))
    assert table.empty
    assert "pass" in table.columns


def test_format_table(run_dir):
    text = format_table(summarize_fits(RunManifest.load(str(run_dir))))
    lines = text.splitlines()
    assert lines[0].split() == ["name", "command", "value", "predicted", "tolerance", "pass"]
    assert len(lines) == 4
    assert lines[1].split() == ["duality", "corr", "1.3", "4", "0", "pass"]
    assert lines[-1].split() == ["density_defect", "density", "0.01", "-", "-", "-"]


def test_format_table_marks_failures(run_dir):
    fail_one(run_dir)
    text = format_table(summarize_fits(RunManifest.load(str(run_dir))))
    assert text.splitlines()[-1].split()[-1] == "FAIL"


def test_generate_report_writes_summary(run_dir, capsys):
    table = generate_report(str(run_dir))
    out = capsys.readouterr().out
    assert "1 files verified" in out
    assert "config 0123456789ab" in out
    assert len(table) == 3
    written = pd.read_csv(run_dir / "report" / "summary.csv")
    assert written["name"].tolist() == table["name"].tolist()


def test_report_is_not_listed_in_manifest(run_dir):
    generate_report(str(run_dir))
    generate_report(str(run_dir))
    manifest = RunManifest.load(str(run_dir))
    assert list(manifest.commands["decay"].outputs) == ["decay/decay_L1.csv"]


def test_check_mode_fails_on_failed_fit(run_dir):
    fail_one(run_dir)
    generate_report(str(run_dir), write=False)
    with pytest.raises(AcceptanceError, match="variance_operator"):
        generate_report(str(run_dir), check=True, write=False)


def test_missing_manifest(temp_output_dir):
    with pytest.raises(ManifestIntegrityError, match="no manifest"):
        generate_report(str(temp_output_dir))


def test_tampered_output(run_dir):
    (run_dir / "decay" / "decay_L1.csv").write_text("n,value\n", encoding="utf-8")
    with pytest.raises(ManifestIntegrityError):
        generate_report(str(run_dir), write=False)
