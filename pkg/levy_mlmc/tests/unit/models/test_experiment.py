"""
Unit tests for the pydantic experiment configuration.
"""

import unittest

from pydantic import ValidationError

from levy_mlmc.models import BoundarySide, ExperimentConfig, MeshMode, SubordinatorFamily
from levy_mlmc.services.presets import preset_data


class TestExperimentConfig(unittest.TestCase):
    """Test cases for ExperimentConfig validation and expansion."""

    def setUp(self):
        self.data = preset_data("poisson1")

    def test_preset_validates(self):
        config = ExperimentConfig.model_validate(self.data)
        self.assertEqual(config.preset, "poisson1")
        self.assertEqual(config.levels.max_level, 5)

    def test_hierarchy_starts_below_level_one(self):
        config = ExperimentConfig.model_validate(self.data)
        h = config.levels.hierarchy(2)
        self.assertAlmostEqual(h[0], 0.3 * 1.7)
        self.assertAlmostEqual(h[1], 0.3)
        self.assertAlmostEqual(h[2], 0.3 / 1.7)

    def test_missing_field_is_reported_by_path(self):
        del self.data["w2"]["r"]
        with self.assertRaises(ValidationError) as ctx:
            ExperimentConfig.model_validate(self.data)
        self.assertIn(("w2", "r"), [tuple(e["loc"]) for e in ctx.exception.errors()])

    def test_unknown_keys_are_rejected(self):
        self.data["levels"]["h2"] = 0.1
        with self.assertRaises(ValidationError):
            ExperimentConfig.model_validate(self.data)

    def test_reference_level_must_exceed_max_level(self):
        self.data["estimator"]["reference_level"] = 5
        with self.assertRaises(ValidationError):
            ExperimentConfig.model_validate(self.data)

    def test_cv_variants_need_nu_s(self):
        self.data["estimator"]["variants"] = ["uniform-mlmc-cv"]
        with self.assertRaises(ValidationError):
            ExperimentConfig.model_validate(self.data)

    def test_gamma_needs_shape(self):
        self.data["subordinator"] = {"family": "gamma", "rate": 10.0}
        with self.assertRaises(ValidationError):
            ExperimentConfig.model_validate(self.data)

    def test_problem_expansion(self):
        problem = ExperimentConfig.model_validate(self.data).problem(17)
        self.assertEqual(problem.reference_grid.shape, (17, 17))
        self.assertEqual(problem.cut_level, 8.0)
        self.assertEqual(problem.subordinator.family, SubordinatorFamily.POISSON)
        self.assertEqual(problem.boundary.dirichlet_values[BoundarySide.RIGHT], 0.3)
        self.assertEqual(problem.transforms.phi2.scale, 5.0)

    def test_overrides_are_revalidated(self):
        config = ExperimentConfig.model_validate(self.data)
        changed = config.with_overrides(seed=7, scale=0.05, max_level=3, reference_level=4, threads=2)
        self.assertEqual((changed.seed, changed.threads), (7, 2))
        self.assertEqual(changed.levels.max_level, 3)
        self.assertEqual(changed.estimator.reference_mesh, MeshMode.ADAPTED)
        with self.assertRaises(ValidationError):
            config.with_overrides(max_level=7)

    def test_scaled_sample_numbers(self):
        config = ExperimentConfig.model_validate(self.data).with_overrides(scale=0.05)
        self.assertEqual(config.scaled(100), 5)
        self.assertEqual(config.scaled(3), 1)


if __name__ == "__main__":
    unittest.main()
