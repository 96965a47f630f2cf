"""Tests for CSV and JSON emission."""

import json
import math

from src.utils.output import SCHEMA_VERSION, write_csv, write_json


class TestWriteCsv:
    def test_fixed_float_format(self, tmp_path):
        path = write_csv([{"L_km": 1.0, "rate": 1.0 / 3.0}], tmp_path / "r.csv")
        assert path.read_text().splitlines() == ["L_km,rate", "1,0.333333333333"]

    def test_column_order(self, tmp_path):
        rows = [{"b": 1, "a": 2}]
        path = write_csv(rows, tmp_path / "r.csv", columns=["a", "b"])
        assert path.read_text().splitlines()[0] == "a,b"

    def test_creates_parent(self, tmp_path):
        path = write_csv([{"x": 1}], tmp_path / "deep" / "dir" / "r.csv")
        assert path.exists()

    def test_nan_is_empty_cell(self, tmp_path):
        path = write_csv([{"L_km": 2.0, "rate": math.nan}], tmp_path / "r.csv")
        assert path.read_text().splitlines()[1] == "2,"


class TestWriteJson:
    def test_schema_version_and_non_finite(self, tmp_path):
        path = write_json({"a": math.nan, "b": [math.inf, 1.0]}, tmp_path / "r.json")
        data = json.loads(path.read_text())
        assert data == {"schema_version": SCHEMA_VERSION, "a": None, "b": ["inf", 1.0]}

    def test_atomic_replace(self, tmp_path):
        path = tmp_path / "r.json"
        write_json({"run": 1}, path)
        write_json({"run": 2}, path)
        assert json.loads(path.read_text())["run"] == 2
        assert list(tmp_path.iterdir()) == [path]
