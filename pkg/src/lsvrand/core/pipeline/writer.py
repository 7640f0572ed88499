"""
Result writer

Writes tables as CSV in a fixed dialect (comma separated, header row, 17
significant digits, LF line endings) and summaries as JSON, so reruns with
the same config and seed produce byte-identical files.
"""

import json
import logging
import os
from typing import Any, Dict, List

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _plain(value: Any) -> Any:
    """Convert numpy scalars and arrays into JSON-serializable values."""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_plain(item) for item in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None if np.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


class ResultWriter:
    """Writes one command's outputs under a common directory."""

    def __init__(self, output_dir: str, subdir: str = ""):
        """Initialize result writer.

        Args:
            output_dir: Base output directory
            subdir: Optional subdirectory for this command's files
        """
        self.output_dir = output_dir
        self.target_dir = os.path.join(output_dir, subdir) if subdir else output_dir
        os.makedirs(self.target_dir, exist_ok=True)
        self.written: List[str] = []

    def _path(self, filename: str) -> str:
        path = os.path.join(self.target_dir, filename)
        self.written.append(path)
        return path

    def write_frame(self, name: str, df: pd.DataFrame) -> str:
        """Write a table as ``<name>.csv``.

        Returns:
            Path of the written file
        """
        path = self._path(f"{name}.csv")
        df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.debug("Wrote %d rows to %s", len(df), path)
        return path

    def write_json(self, name: str, payload: Dict[str, Any]) -> str:
        """Write a mapping as ``<name>.json`` with sorted keys."""
        path = self._path(f"{name}.json")
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(_plain(payload), handle, indent=2, sort_keys=True)
            handle.write("\n")
        return path

    def relative(self, path: str) -> str:
        return os.path.relpath(path, self.output_dir).replace(os.sep, "/")
