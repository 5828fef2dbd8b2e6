"""
Unit tests for subordinator path models.
"""

import unittest

import numpy as np

from levy_mlmc.core.errors import PathError
from levy_mlmc.models import (
    PathKind,
    SimulationMode,
    SubordinatorFamily,
    SubordinatorPath,
    SubordinatorSpec,
)


class TestSubordinatorPath(unittest.TestCase):
    """Test cases for SubordinatorPath validation and construction."""

    def test_rejects_decreasing_values(self):
        with self.assertRaises(PathError):
            SubordinatorPath(1.0, np.array([0.2, 0.4]), np.array([2.0, 1.0]), PathKind.EXACT_POISSON)

    def test_rejects_unsorted_or_outside_times(self):
        with self.assertRaises(PathError):
            SubordinatorPath(1.0, np.array([0.4, 0.2]), np.array([1.0, 2.0]), PathKind.EXACT_POISSON)
        with self.assertRaises(PathError):
            SubordinatorPath(1.0, np.array([0.0]), np.array([1.0]), PathKind.EXACT_POISSON)
        with self.assertRaises(PathError):
            SubordinatorPath(1.0, np.array([1.5]), np.array([1.0]), PathKind.EXACT_POISSON)

    def test_grid_approximation_needs_grid_values(self):
        with self.assertRaises(PathError):
            SubordinatorPath(1.0, np.array([]), np.array([]), PathKind.GRID_APPROX)

    def test_from_grid_values_drops_last_increment(self):
        path = SubordinatorPath.from_grid_values(1.0, [0.0, 1.0, 1.0, 2.0, 3.0])
        np.testing.assert_allclose(path.jump_times, [0.25, 0.75])
        np.testing.assert_allclose(path.values, [1.0, 2.0])
        self.assertEqual(path.grid_cells, 4)
        self.assertEqual(path.max_level, 2.0)

    def test_single_cell_grid_is_zero_path(self):
        path = SubordinatorPath.from_grid_values(1.0, [0.0, 4.0])
        self.assertEqual(path.jump_count, 0)
        self.assertEqual(path.max_level, 0.0)

    def test_dict_round_trip_keeps_grid_values(self):
        path = SubordinatorPath.from_grid_values(1.0, [0.0, 0.5, 2.0])
        restored = SubordinatorPath.from_dict(path.to_dict())
        np.testing.assert_array_equal(restored.jump_times, path.jump_times)
        np.testing.assert_array_equal(restored.grid_values, path.grid_values)
        self.assertEqual(restored.kind, PathKind.GRID_APPROX)


class TestSubordinatorSpec(unittest.TestCase):
    """Test cases for SubordinatorSpec validation."""

    def test_gamma_needs_shape(self):
        with self.assertRaises(PathError):
            SubordinatorSpec(SubordinatorFamily.GAMMA, 10.0)

    def test_gamma_cannot_be_exact(self):
        with self.assertRaises(PathError):
            SubordinatorSpec(SubordinatorFamily.GAMMA, 10.0, 4.0, SimulationMode.EXACT)

    def test_needs_grid(self):
        self.assertTrue(SubordinatorSpec(SubordinatorFamily.POISSON, 1.0).needs_grid)
        self.assertFalse(
            SubordinatorSpec(SubordinatorFamily.POISSON, 1.0, mode=SimulationMode.EXACT).needs_grid
        )


if __name__ == "__main__":
    unittest.main()
