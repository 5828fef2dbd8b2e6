"""
Unit tests for the command line interface.
"""

import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from levy_mlmc.cli import build_parser, main
from levy_mlmc.cli.commands import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, default_out, resolve_config
from levy_mlmc.core.errors import EstimatorError
from levy_mlmc.services import export
from levy_mlmc.tests.unit.utils.test_utils import TestDataFactory


@patch("levy_mlmc.cli.commands.console")
class TestCli(unittest.TestCase):
    """Test cases for argument handling and exit codes."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_overrides_are_applied(self, console):
        args = build_parser().parse_args(
            ["run", "--preset", "poisson1", "--seed", "4", "--scale", "0.1", "--levels", "3", "--threads", "2"]
        )
        config = resolve_config(args)
        self.assertEqual((config.seed, config.scale, config.threads), (4, 0.1, 2))
        self.assertEqual(config.levels.max_level, 3)
        self.assertEqual(default_out(config).name, "poisson1-seed4")

    def test_dry_run(self, console):
        code = main(["dry-run", "--preset", "poisson1", "--out", str(self.dir)])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(console.print.called)
        self.assertEqual(list(self.dir.iterdir()), [])

    def test_run_with_dry_run_flag(self, console):
        code = main(["run", "--dry-run", "--preset", "gamma-cv-1", "--levels", "2", "--out", str(self.dir)])
        self.assertEqual(code, EXIT_OK)

    def test_incomplete_config_exits_with_config_code(self, console):
        path = self.dir / "bad.toml"
        path.write_text('preset = "custom"\nseed = 1\n')
        self.assertEqual(main(["dry-run", "--config", str(path)]), EXIT_CONFIG)

    def test_invalid_override_exits_with_config_code(self, console):
        code = main(["dry-run", "--preset", "poisson1", "--levels", "9"])
        self.assertEqual(code, EXIT_CONFIG)

    def test_unknown_preset_is_a_usage_error(self, console):
        with patch("sys.stderr"), self.assertRaises(SystemExit) as ctx:
            main(["dry-run", "--preset", "poisson9"])
        self.assertEqual(ctx.exception.code, 2)

    def test_estimator_failure_exits_with_failure_code(self, console):
        with patch("levy_mlmc.cli.commands.ExperimentRunner") as runner:
            runner.return_value.run.side_effect = EstimatorError("solve failed", "0/1:7.0")
            code = main(["run", "--preset", "poisson1", "--out", str(self.dir)])
        self.assertEqual(code, EXIT_FAILURE)

    def test_emit_plot(self, console):
        export.write_rmse_csv(TestDataFactory.rmse_table(), self.dir / "uniform-mlmc" / "rmse.csv")
        code = main(["emit-plot", "--out", str(self.dir)])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue((self.dir / "uniform-mlmc" / "time_to_error.csv").exists())

    def test_emit_plot_without_results(self, console):
        self.assertEqual(main(["emit-plot", "--out", str(self.dir)]), EXIT_CONFIG)


if __name__ == "__main__":
    unittest.main()
