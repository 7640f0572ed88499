"""
Run summary

Collects the fit rows of a run manifest into one table, verifies the hashes
of every file the manifest lists and, in check mode, fails when a fit is
outside its configured tolerance.
"""

import datetime
import os
from typing import Optional

import numpy as np
import pandas as pd

from ..core.pipeline.manifest import RunManifest
from ..errors import AcceptanceError, ManifestIntegrityError

SUMMARY_COLUMNS = ["name", "command", "value", "predicted", "tolerance", "pass"]


def summarize_fits(manifest: RunManifest) -> pd.DataFrame:
    """
    Summarize the fitted quantities of a manifest.
    Args:
        manifest: Loaded run manifest
    Returns:
        DataFrame with one row per fit, sorted by command then name
    """
    rows = [
        {
            "name": fit.name,
            "command": fit.command,
            "value": fit.value,
            "predicted": fit.predicted,
            "tolerance": fit.tolerance,
            "pass": fit.passed,
        }
        for fit in manifest.fits.values()
    ]
    if not rows:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    table = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    return table.sort_values(["command", "name"], ignore_index=True)


def _cell(value) -> str:
    if value is None or (isinstance(value, float) and pd.isna(value)):
        return "-"
    if isinstance(value, (bool, np.bool_)):
        return "pass" if value else "FAIL"
    if isinstance(value, (float, np.floating)):
        return f"{value:.6g}"
    return str(value)


def format_table(table: pd.DataFrame) -> str:
    """Fixed-width text rendering of a summary table."""
    cells = table.reindex(columns=SUMMARY_COLUMNS).astype(object).map(_cell)
    return cells.to_string(index=False, justify="left")


def generate_report(output_dir: str, check: bool = False, write: bool = True) -> pd.DataFrame:
    """
    Verify a run directory and print its summary table.
    Args:
        output_dir: Directory holding manifest.json
        check: Raise AcceptanceError if any fit failed its check
        write: Also write report/summary.csv (not listed in the manifest)
    Returns:
        The summary table
    """
    manifest: Optional[RunManifest] = RunManifest.load(output_dir)
    if manifest is None:
        raise ManifestIntegrityError(f"no manifest found in '{output_dir}'")

    print("Verifying output hashes...")
    checked = manifest.verify(output_dir)
    print(f"  {len(checked)} files verified against manifest")

    table = summarize_fits(manifest)
    print(f"\nRun summary (config {manifest.config_hash[:12]}, version {manifest.version})")
    print(f"Generated on {datetime.datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
    print(format_table(table))

    if write:
        report_dir = os.path.join(output_dir, "report")
        os.makedirs(report_dir, exist_ok=True)
        table.to_csv(
            os.path.join(report_dir, "summary.csv"),
            index=False,
            float_format="%.17g",
            lineterminator="\n",
        )

    failed = table[table["pass"] == False]  # noqa: E712
    if check and len(failed):
        raise AcceptanceError(f"acceptance failed for {', '.join(failed['name'])}")
    return table
