"""Tests for JSON/CSV report writers"""

import json

import numpy as np
import pandas as pd
import pytest

from thermosig.core.errors import IoError
from thermosig.report.writers import dumps, read_json, read_theta, write_json, write_table


class TestJson:
    """Test deterministic JSON output"""

    def test_sorted_and_stable(self):
        """Test sorted and stable"""
        first = dumps({"b": 1.5, "a": {"z": 2, "y": np.float64(0.1)}})
        second = dumps({"a": {"y": 0.1, "z": 2}, "b": 1.5})
        assert first == second
        assert first.index('"a"') < first.index('"b"')

    def test_non_finite_become_null(self):
        """Test non finite become null"""
        data = json.loads(dumps({"x": float("nan"), "y": [np.inf, 1.0]}))
        assert data == {"x": None, "y": [None, 1.0]}

    def test_numpy_arrays(self):
        """Test numpy arrays"""
        assert json.loads(dumps({"v": np.arange(3)})) == {"v": [0, 1, 2]}

    def test_write_and_read(self, tmp_path):
        """Test write and read"""
        path = write_json({"theta": {"c_p": 100.0, "alpha": 50.0, "beta_ac": 2000.0}}, tmp_path / "a" / "fit.json")
        assert read_json(path)["theta"]["alpha"] == 50.0
        theta = read_theta(path)
        assert theta.as_tuple() == (100.0, 50.0, 2000.0)

    def test_unwritable_target(self, tmp_path):
        """Test unwritable target"""
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(IoError):
            write_json({}, blocker / "fit.json")

    def test_read_missing(self, tmp_path):
        """Test read missing"""
        with pytest.raises(IoError):
            read_json(tmp_path / "absent.json")

    def test_read_theta_without_theta(self, tmp_path):
        """Test read theta without theta"""
        path = write_json({"frames": 3}, tmp_path / "x.json")
        with pytest.raises(IoError):
            read_theta(path)


class TestTable:
    """Test CSV tables"""

    def test_write_table(self, tmp_path):
        """Test write table"""
        path = write_table(pd.DataFrame({"a": [1.0, np.nan], "b": ["x", "y"]}), tmp_path / "t.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "a,b"
        assert lines[2] == ",y"
