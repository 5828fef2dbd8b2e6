"""
Unit tests for CSV and JSON export.
"""

import json
import math
import tempfile
import unittest
from pathlib import Path

from levy_mlmc.core.errors import ConfigurationError
from levy_mlmc.models import EstimatorKind, EstimatorResult, GridField, LevelStats, RmseRow, RmseTable
from levy_mlmc.services import export
from levy_mlmc.services.experiment_runner import emit_plot_data
from levy_mlmc.tests.unit.utils.test_utils import TestDataFactory


class TestTables(unittest.TestCase):
    """Test cases for RMSE and level tables."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_rmse_csv(self):
        path = export.write_rmse_csv(TestDataFactory.rmse_table(), self.dir / "v" / "rmse.csv")
        lines = path.read_text().splitlines()
        self.assertEqual(lines[0], "level,h_L,rmse,fitted_rate,wallclock_s")
        self.assertEqual(len(lines), 4)
        table = export.read_rmse_csv(path)
        self.assertEqual([r.level for r in table.rows], [1, 2, 3])
        self.assertEqual(table.rows[1].h, 0.3 / 1.7)
        self.assertEqual(table.fitted_rate, 1.0)

    def test_read_rejects_foreign_csv(self):
        path = self.dir / "rmse.csv"
        path.write_text("a,b\n1,2\n")
        with self.assertRaises(ConfigurationError):
            export.read_rmse_csv(path)
        with self.assertRaises(ConfigurationError):
            export.read_rmse_csv(self.dir / "missing.csv")

    def test_levels_csv_and_json(self):
        grid = TestDataFactory.grid(2)
        result = EstimatorResult(
            EstimatorKind.MLMC,
            GridField.zeros(grid),
            [LevelStats(0, 5, 0.25, 1.0), LevelStats(1, 2, 0.0, 2.0)],
            "0/2.1.0",
        )
        lines = export.write_levels_csv(result, self.dir / "levels.csv").read_text().splitlines()
        self.assertEqual(lines[0], "level,M,VAR,cost")
        self.assertEqual(lines[1], "0,5,0.25,1.000000")
        data = json.loads(export.write_json(result.to_dict(), self.dir / "r.json").read_text())
        self.assertEqual(data["seed_schedule"], "0/2.1.0")
        mean_lines = export.write_mean_field_csv(result, self.dir / "mean.csv").read_text().splitlines()
        self.assertEqual(len(mean_lines), 1 + 9)


class TestPlotData(unittest.TestCase):
    """Test cases for log-log and time-to-error data."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_single_point_is_rejected(self):
        table = RmseTable([RmseRow(1, 0.3, 0.1, 1.0)], float("nan"))
        with self.assertRaises(ConfigurationError):
            export.plot_rows(table)

    def test_slope_and_cumulative_time(self):
        loglog, time_to_error, slope = export.plot_rows(TestDataFactory.rmse_table())
        self.assertAlmostEqual(slope, 1.0, delta=1e-12)
        self.assertAlmostEqual(float(loglog[0]["log_h"]), math.log(0.3))
        self.assertEqual([row["cumulative_wallclock_s"] for row in time_to_error], ["1.500000", "4.500000", "9.000000"])

    def test_write_plot_data(self):
        loglog, time_to_error, _ = export.write_plot_data(TestDataFactory.rmse_table(), self.dir, stem="uniform")
        self.assertEqual(loglog.name, "uniform_rmse_loglog.csv")
        self.assertTrue(loglog.read_text().startswith("level,h_L,rmse,log_h,log_rmse,fitted_slope\n"))
        self.assertTrue(time_to_error.read_text().startswith("level,cumulative_wallclock_s,rmse\n"))

    def test_emit_plot_data_scans_variant_dirs(self):
        for variant in ("adapted-mlmc", "uniform-mlmc"):
            export.write_rmse_csv(TestDataFactory.rmse_table(), self.dir / variant / "rmse.csv")
        emitted = emit_plot_data(self.dir)
        self.assertEqual(len(emitted), 2)
        self.assertTrue((self.dir / "uniform-mlmc" / "rmse_loglog.csv").exists())
        self.assertAlmostEqual(emitted[0]["slope"], 1.0, delta=1e-12)

    def test_emit_plot_data_without_tables(self):
        with self.assertRaises(ConfigurationError):
            emit_plot_data(self.dir)


if __name__ == "__main__":
    unittest.main()
