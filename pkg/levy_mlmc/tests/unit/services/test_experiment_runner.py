"""
Unit tests for the experiment runner.
"""

import json
import math
import tempfile
import unittest
from pathlib import Path
from unittest.mock import Mock, patch

from levy_mlmc.models import EstimatorKind, MeshMode
from levy_mlmc.services.experiment_runner import ExperimentRunner, VariantPlan
from levy_mlmc.services.presets import build_config, load_experiment, preset_data, preset_names

GOLDEN_DIR = Path(__file__).resolve().parents[2] / "fixtures" / "dry_run"


def tiny_config(preset: str = "poisson1", **estimator):
    data = preset_data(preset)
    data.update({"seed": 1, "scale": 0.01, "threads": 1, "reference_points": 17})
    data["levels"]["max_level"] = 1
    data["estimator"].update(
        {"n_runs": 2, "reference_level": 2, "reference_samples": 2, **estimator}
    )
    return build_config(data)


class TestVariantPlan(unittest.TestCase):
    """Test cases for variant name parsing."""

    def test_parse(self):
        plan = ExperimentRunner(tiny_config()).equilibrated_plan(1)
        cv = VariantPlan.parse("uniform-mlmc-cv", plan)
        self.assertEqual(cv.mesh_mode, MeshMode.UNIFORM)
        self.assertTrue(cv.control_variate)
        adapted = VariantPlan.parse("adapted-mlmc", plan)
        self.assertEqual(adapted.plan.mesh_mode, MeshMode.ADAPTED)
        self.assertFalse(adapted.control_variate)


class TestExperimentRunner(unittest.TestCase):
    """Test cases for plans, dry runs and a desk-scale run."""

    def test_scaled_equilibrated_plan(self):
        runner = ExperimentRunner(tiny_config())
        plan = runner.equilibrated_plan(1)
        self.assertEqual(len(plan.levels), 2)
        self.assertAlmostEqual(plan.level(1).h, 0.3)
        self.assertEqual(plan.samples, [1, 1])

    def test_reference_params(self):
        runner = ExperimentRunner(tiny_config())
        params = runner.reference_params()
        self.assertEqual(params.level, 2)
        self.assertAlmostEqual(params.h, 0.3 / 1.7)
        self.assertEqual(params.samples, 2)

    def test_dry_run_report(self):
        report = ExperimentRunner(tiny_config()).dry_run()
        self.assertEqual(report["preset"], "poisson1")
        self.assertEqual(report["sample_numbers"], "equilibrated")
        self.assertAlmostEqual(report["cut_exceedance"] / 1.1252e-06, 1.0, delta=5e-4)
        self.assertEqual([v["name"] for v in report["variants"]], ["adapted-mlmc", "uniform-mlmc"])
        json.dumps(report)

    def test_pilot_optimized_report(self):
        report = ExperimentRunner(tiny_config("gamma-cv-1", pilot_samples=2)).dry_run()
        self.assertEqual(report["sample_numbers"], "pilot-optimized")

    def test_pilot_runs_on_each_variant_mesh_mode(self):
        runner = ExperimentRunner(tiny_config(pilot_samples=2))
        pilots = {
            MeshMode.ADAPTED: {False: [1.0, 0.5]},
            MeshMode.UNIFORM: {False: [1.0, 0.25]},
        }
        with patch.object(runner, "_pilot", side_effect=lambda plan: pilots[plan.mesh_mode]) as pilot, \
                patch.object(runner, "reference", return_value=Mock()), \
                patch.object(runner, "run_variant", return_value=Mock()) as run_variant:
            runner.run()
        self.assertEqual(
            [c.args[0].mesh_mode for c in pilot.call_args_list], [MeshMode.ADAPTED, MeshMode.UNIFORM]
        )
        for c in run_variant.call_args_list:
            variant, _, pilot_variances = c.args
            self.assertIs(pilot_variances, pilots[variant.mesh_mode])

    def test_run_writes_artifacts(self):
        config = tiny_config(variants=["uniform-mlmc"])
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp)
            summary = ExperimentRunner(config, out).run()
            variant_dir = out / "uniform-mlmc"
            for name in ("rmse.csv", "levels.csv", "mean_field.csv", "result.json"):
                self.assertTrue((variant_dir / name).exists(), name)
            self.assertTrue((out / "reference_mean_field.csv").exists())
            data = json.loads((out / "result.json").read_text())
        self.assertEqual([row.level for row in summary.outcomes[0].table.rows], [1])
        self.assertEqual(data["variants"][0]["variant"], "uniform-mlmc")
        self.assertEqual(data["reference"]["kind"], "slmc")


class TestDryRunGolden(unittest.TestCase):
    """Dry-run reports of every preset against checked-in JSON."""

    def assert_matches(self, actual, expected, path="report"):
        if isinstance(expected, dict):
            self.assertIsInstance(actual, dict, path)
            self.assertEqual(sorted(actual), sorted(expected), path)
            for key, value in expected.items():
                self.assert_matches(actual[key], value, f"{path}.{key}")
        elif isinstance(expected, list):
            self.assertEqual(len(actual), len(expected), path)
            for index, (a, e) in enumerate(zip(actual, expected)):
                self.assert_matches(a, e, f"{path}[{index}]")
        elif isinstance(expected, float):
            self.assertTrue(math.isclose(actual, expected, rel_tol=1e-9), f"{path}: {actual} != {expected}")
        else:
            self.assertEqual(actual, expected, path)

    def test_presets_match_golden_reports(self):
        presets = [name for name in preset_names() if name != "custom"]
        self.assertEqual(len(presets), 5)
        for name in presets:
            with self.subTest(preset=name):
                config = load_experiment(name).with_overrides(threads=1)
                report = json.loads(json.dumps(ExperimentRunner(config).dry_run()))
                expected = json.loads((GOLDEN_DIR / f"{name}.json").read_text())
                self.assert_matches(report, expected)


class TestControlVariateRuns(unittest.TestCase):
    """Control-variate variants through the runner at desk scale."""

    def setUp(self):
        self.config = tiny_config(
            "gamma-cv-1", variants=["uniform-mlmc-cv"], nu_s=0.1, pilot_samples=None
        )

    def test_run_variant_uses_control_variate(self):
        runner = ExperimentRunner(self.config)
        variant = runner.variant_plans()[0]
        self.assertTrue(variant.control_variate)
        outcome = runner.run_variant(variant, runner.reference())
        self.assertEqual(outcome.top_result.kind, EstimatorKind.MLMC_CV)
        self.assertIsNotNone(outcome.top_result.cv_mean)
        self.assertEqual([row.level for row in outcome.table.rows], [1])
        self.assertGreater(outcome.table.rows[0].rmse, 0.0)

    def test_pilot_optimized_run(self):
        config = tiny_config("gamma-cv-1", nu_s=0.1, pilot_samples=2)
        summary = ExperimentRunner(config).run()
        kinds = {o.variant: o.top_result.kind for o in summary.outcomes}
        self.assertEqual(
            kinds, {"uniform-mlmc": EstimatorKind.MLMC, "uniform-mlmc-cv": EstimatorKind.MLMC_CV}
        )


if __name__ == "__main__":
    unittest.main()
