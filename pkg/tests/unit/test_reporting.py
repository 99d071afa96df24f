#!/usr/bin/env python3
"""
Unit tests for CSV and JSON report output.
"""

import csv
import json

from xvem2d.core.mesh import build_structured_quad_mesh
from xvem2d.experiments.config import config_hash
from xvem2d.experiments.reporting import CSV_COLUMNS, ReportWriter, mesh_statistics


class TestReportWriter:
    """Test cases for report files."""

    def test_csv_columns(self, temp_dir, default_config):
        writer = ReportWriter(temp_dir / "out", default_config)
        path = writer.write_csv("runs", [{"label": "quad-10", "h": 0.28, "n_dofs": 242, "energy": 1.0, "K_I": None}])
        with open(path, newline="", encoding="utf-8") as f:
            rows = list(csv.DictReader(f))
        assert list(rows[0].keys()) == CSV_COLUMNS
        assert rows[0]["label"] == "quad-10"
        assert rows[0]["K_I"] == ""

    def test_json_report(self, temp_dir, default_config, unit_square):
        mesh = build_structured_quad_mesh(unit_square, 2, 3)
        writer = ReportWriter(temp_dir, default_config)
        paths = writer.write_report("patch", "patch-test", [], {"error": float("nan")}, mesh)
        with open(paths["json"], encoding="utf-8") as f:
            report = json.load(f)
        assert report["command"] == "patch-test"
        assert report["config_hash"] == config_hash(default_config)
        assert report["mesh"]["n_elements"] == 6
        assert report["results"]["error"] == "nan"
        assert paths["csv"].exists()

    def test_mesh_statistics(self, unit_square):
        stats = mesh_statistics(build_structured_quad_mesh(unit_square, 4, 4))
        assert stats["n_nodes"] == 25
        assert stats["vertices_per_element"]["max"] == 4
        assert abs(stats["area"] - 1.0) < 1e-14
