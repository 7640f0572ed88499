"""Tests for the result writer."""

import json
import os

import numpy as np
import pandas as pd
import pytest

from src.lsvrand.core.pipeline.writer import ResultWriter


@pytest.fixture
def writer(temp_output_dir):
    return ResultWriter(str(temp_output_dir), subdir="decay")


def test_creates_target_dir(writer, temp_output_dir):
    assert os.path.isdir(temp_output_dir / "decay")
    assert writer.written == []


def test_csv_dialect(writer):
    """Test that floats keep 17 significant digits and lines end in LF."""
    frame = pd.DataFrame({"n": [1, 2], "value": [0.1, 1.0 / 3.0]})
    path = writer.write_frame("curve", frame)
    with open(path, "rb") as handle:
        raw = handle.read()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == "n,value"
    assert lines[1] == "1,0.10000000000000001"
    assert float(lines[2].split(",")[1]) == 1.0 / 3.0


def test_json_is_sorted_and_plain(writer):
    path = writer.write_json(
        "summary",
        {
            "zeta": np.float64(0.5),
            "alpha": np.arange(3),
            "nested": {"upper": float("inf"), "lower": -np.inf, "missing": float("nan")},
            "count": np.int64(7),
        },
    )
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    assert text.endswith("}\n")
    payload = json.loads(text)
    assert list(payload) == ["alpha", "count", "nested", "zeta"]
    assert payload["alpha"] == [0, 1, 2]
    assert payload["count"] == 7
    assert payload["nested"] == {"lower": "-inf", "missing": None, "upper": "inf"}


def test_rewrites_are_identical(writer):
    frame = pd.DataFrame({"x": np.linspace(0.0, 1.0, 7)})
    first = open(writer.write_frame("grid", frame), "rb").read()
    second = open(writer.write_frame("grid", frame), "rb").read()
    assert first == second


def test_written_and_relative(writer):
    csv_path = writer.write_frame("a", pd.DataFrame({"x": [1]}))
    json_path = writer.write_json("b", {"x": 1})
    assert writer.written == [csv_path, json_path]
    assert writer.relative(csv_path) == "decay/a.csv"


def test_without_subdir(temp_output_dir):
    writer = ResultWriter(str(temp_output_dir))
    path = writer.write_json("fit", {})
    assert writer.relative(path) == "fit.json"
