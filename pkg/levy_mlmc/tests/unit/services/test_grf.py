"""
Unit tests for the random field service.
"""

import tempfile
import unittest
from pathlib import Path

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import kv

from levy_mlmc.core.errors import ConfigurationError, EmbeddingError, FieldError
from levy_mlmc.models import GridField, MaternParams, TensorGrid
from levy_mlmc.services.grf import (
    CholeskySampler,
    CirculantEmbeddingSampler,
    build_embedding,
    dump_field_csv,
    eval_field,
    get_field_sampler,
    matern_covariance,
    restrict_field,
    sample_grf,
    sample_grf_cholesky,
)
from levy_mlmc.services.grf.adapters import _cached_embedding
from levy_mlmc.services.grf.covariance import covariance_matrix
from levy_mlmc.tests.unit.utils.test_utils import TestDataFactory, zero_normal_rng


class TestMaternCovariance(unittest.TestCase):
    """Test cases for the Matern covariance."""

    def setUp(self):
        self.params = MaternParams(1.5, 0.5, 1.0)

    def test_variance_at_zero(self):
        self.assertEqual(matern_covariance(0.0, MaternParams(1.5, 0.3, 2.25)), 2.25)
        self.assertEqual(matern_covariance(0.0, MaternParams(1.2, 0.3, 2.25)), 2.25)

    def test_closed_form_value(self):
        self.assertAlmostEqual(matern_covariance(0.5, self.params), 0.29778, delta=1e-4)

    def test_far_distance_vanishes(self):
        self.assertLess(matern_covariance(10.0, self.params), 1e-18)

    def test_closed_form_matches_bessel_form(self):
        s = np.linspace(0.01, 2.0, 50)
        for nu in (1.5, 2.5):
            params = MaternParams(nu, 0.7, 1.3)
            t = 2.0 * s * np.sqrt(nu) / params.r
            bessel = params.sigma2 * 2.0 ** (1.0 - nu) / gamma_fn(nu) * t**nu * kv(nu, t)
            np.testing.assert_allclose(matern_covariance(s, params), bessel, rtol=1e-10)

    def test_general_order_is_continuous_in_nu(self):
        s = np.linspace(0.0, 1.0, 11)
        near = matern_covariance(s, MaternParams(1.5 + 1e-7, 0.5, 1.0))
        np.testing.assert_allclose(near, matern_covariance(s, self.params), atol=1e-6)

    def test_rejects_negative_distance(self):
        with self.assertRaises(FieldError):
            matern_covariance(-0.1, self.params)

    def test_covariance_matrix_is_positive_definite(self):
        cov = covariance_matrix(TestDataFactory.grid(7), self.params)
        self.assertEqual(cov.shape, (64, 64))
        self.assertGreater(np.linalg.eigvalsh(cov).min(), 0.0)


class TestCirculantEmbedding(unittest.TestCase):
    """Test cases for circulant embedding and sampling."""

    def setUp(self):
        self.grid = TestDataFactory.grid(7)
        self.params = MaternParams(1.5, 0.5, 1.0)

    def test_circulant_size(self):
        factor = build_embedding(self.grid, self.params, padding=2, clip_bound=1.0)
        self.assertEqual(factor.circulant_shape, (28, 28))
        self.assertEqual(factor.normal_budget, 2 * 28 * 28)

    def test_clipping_nonincreasing_in_padding(self):
        grid = TestDataFactory.grid(15)
        params = MaternParams(1.5, 1.0, 1.0)
        small = build_embedding(grid, params, padding=1, clip_bound=1.0)
        large = build_embedding(grid, params, padding=2, clip_bound=1.0)
        self.assertLessEqual(large.clipped_fraction, small.clipped_fraction + 1e-15)

    def test_auto_padding_reaches_clean_spectrum(self):
        factor = build_embedding(self.grid, self.params)
        self.assertLess(factor.clipped_fraction, 1e-3)
        self.assertGreaterEqual(factor.padding, 1)

    def test_clip_bound_is_enforced(self):
        grid = TestDataFactory.grid(15)
        params = MaternParams(1.5, 1.0, 1.0)
        factor = build_embedding(grid, params, padding=1, clip_bound=1.0)
        if factor.clipped_fraction > 0.0:
            with self.assertRaises(EmbeddingError):
                build_embedding(grid, params, padding=1, clip_bound=factor.clipped_fraction / 2)

    def test_zero_noise_gives_zero_field(self):
        factor = build_embedding(self.grid, self.params)
        field = sample_grf(factor, zero_normal_rng())
        np.testing.assert_array_equal(field.values, np.zeros(self.grid.shape))

    def test_same_seed_same_field(self):
        factor = build_embedding(self.grid, self.params)
        first = sample_grf(factor, np.random.default_rng(5))
        second = sample_grf(factor, np.random.default_rng(5))
        np.testing.assert_array_equal(first.values, second.values)

    def test_moments_match_covariance(self):
        sampler = CirculantEmbeddingSampler()
        rng = np.random.default_rng(11)
        draws = np.array(
            [sampler.sample(self.grid, self.params, rng).values.ravel() for _ in range(2000)]
        )
        variance = draws.var(axis=0, ddof=1)
        # standard error of a sample variance of Gaussians
        stderr_var = np.sqrt(2.0 / 1999)
        self.assertLess(abs(variance.mean() - 1.0), 3.0 * stderr_var)
        self.assertTrue(np.all(np.abs(variance - 1.0) < 4.5 * stderr_var))

        a, b = 0, 27
        points = self.grid.points()
        expected = matern_covariance(np.linalg.norm(points[a] - points[b]), self.params)
        products = draws[:, a] * draws[:, b]
        stderr = products.std(ddof=1) / np.sqrt(len(products))
        self.assertLess(abs(products.mean() - expected), 3.0 * stderr + 0.02)

    def test_embedding_cache_is_bounded(self):
        self.assertEqual(_cached_embedding.cache_info().maxsize, 8)
        for cells in range(2, 14):
            build_embedding(TestDataFactory.grid(cells), self.params, padding=1, clip_bound=1.0)
        self.assertLessEqual(_cached_embedding.cache_info().currsize, 8)

    def test_registry(self):
        self.assertEqual(get_field_sampler().method_name, "circulant")
        self.assertEqual(get_field_sampler("cholesky").method_name, "cholesky")
        with self.assertRaises(ConfigurationError):
            get_field_sampler("spectral")


class TestCholeskySampler(unittest.TestCase):
    """Test cases for the dense Cholesky oracle."""

    def setUp(self):
        self.params = MaternParams(1.5, 0.5, 1.0)

    def test_zero_noise_gives_zero_field(self):
        grid = TestDataFactory.grid(3)
        field = sample_grf_cholesky(grid, self.params, zero_normal_rng())
        np.testing.assert_array_equal(field.values, np.zeros(grid.shape))

    def test_single_point_is_scalar_normal(self):
        grid = TensorGrid(0.0, 0.0, 0.0, 0.0, 1, 1)
        rng = np.random.default_rng(3)
        values = [sample_grf_cholesky(grid, self.params, rng).values[0, 0] for _ in range(4000)]
        self.assertAlmostEqual(np.var(values, ddof=1), 1.0, delta=4.0 * np.sqrt(2.0 / 3999))

    def test_agrees_with_circulant_sampler(self):
        grid = TestDataFactory.grid(7)
        rng_a, rng_b = np.random.default_rng(1), np.random.default_rng(2)
        circulant = CirculantEmbeddingSampler()
        cholesky = CholeskySampler()
        a = np.array([circulant.sample(grid, self.params, rng_a).values.ravel() for _ in range(2000)])
        b = np.array([cholesky.sample(grid, self.params, rng_b).values.ravel() for _ in range(2000)])
        pairs = [(0, 9), (5, 40), (20, 21), (63, 7), (30, 30)]
        agree = 0
        for i, j in pairs:
            pa, pb = a[:, i] * a[:, j], b[:, i] * b[:, j]
            stderr = np.sqrt(pa.var(ddof=1) / len(pa) + pb.var(ddof=1) / len(pb))
            agree += abs(pa.mean() - pb.mean()) <= 3.0 * stderr
        self.assertGreaterEqual(agree, len(pairs) - 1)

    def test_grid_size_limit(self):
        with self.assertRaises(FieldError):
            CholeskySampler().factor(TestDataFactory.grid(64), self.params)


class TestFieldOperations(unittest.TestCase):
    """Test cases for evaluation, restriction and CSV dumps."""

    def test_restriction_is_exact(self):
        fine = TestDataFactory.grid(8)
        values = np.random.default_rng(0).standard_normal(fine.shape)
        field = GridField(fine, values)
        coarse = restrict_field(field, TestDataFactory.grid(2))
        np.testing.assert_array_equal(coarse.values, values[::4, ::4])
        self.assertAlmostEqual(float(eval_field(coarse, 0.5, 0.5)), values[4, 4])

    def test_dump_field_csv(self):
        field = GridField(TestDataFactory.grid(1), np.array([[1.0, 2.0], [3.0, 4.0]]))
        with tempfile.TemporaryDirectory() as tmp:
            path = dump_field_csv(field, Path(tmp) / "field.csv")
            lines = path.read_text().splitlines()
        self.assertEqual(lines[0], "x,y,value")
        self.assertEqual(lines[1:], ["0,0,1", "1,0,3", "0,1,2", "1,1,4"])


if __name__ == "__main__":
    unittest.main()
