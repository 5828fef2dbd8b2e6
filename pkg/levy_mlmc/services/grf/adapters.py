"""
Random Field Sampler Adapters

Concrete Matern field samplers: circulant embedding (FFT) for production
runs and dense Cholesky as a validation oracle.
"""

import logging
import time
from functools import lru_cache
from typing import Optional

import numpy as np

from levy_mlmc.core.env import EMBED_CLIP_BOUND, EMBED_MAX_PADDING
from levy_mlmc.core.errors import EmbeddingError, FieldError
from levy_mlmc.models import EmbeddingFactor, GridField, MaternParams, TensorGrid
from levy_mlmc.services.grf.base_adapter import FieldSampler
from levy_mlmc.services.grf.covariance import covariance_matrix, matern_covariance

logger = logging.getLogger(__name__)

# Clipped spectral mass below which auto padding stops growing
CLIP_TARGET = 1e-10
CHOLESKY_JITTER = 1e-12


def _circulant_spectrum(grid: TensorGrid, params: MaternParams, padding: int) -> np.ndarray:
    """Eigenvalues of the block-circulant extension with m_j = 2 p (n_j - 1)."""
    m1 = 2 * padding * (grid.nx - 1)
    m2 = 2 * padding * (grid.ny - 1)
    k1 = np.arange(m1)
    k2 = np.arange(m2)
    lag_x = np.minimum(k1, m1 - k1) * grid.dx
    lag_y = np.minimum(k2, m2 - k2) * grid.dy
    lags = np.hypot(lag_x[:, None], lag_y[None, :])
    return np.real(np.fft.fft2(matern_covariance(lags, params)))


def _clip(spectrum: np.ndarray):
    negative = spectrum < 0.0
    total = np.abs(spectrum).sum()
    clipped_mass = -spectrum[negative].sum()
    fraction = float(clipped_mass / total) if total > 0.0 else 0.0
    tol = 1e-12 * np.abs(spectrum).max()
    return negative, int(np.count_nonzero(spectrum < -tol)), fraction


@lru_cache(maxsize=8)
def _cached_embedding(
    grid: TensorGrid,
    params: MaternParams,
    padding: Optional[int],
    clip_bound: float,
    max_padding: int,
) -> EmbeddingFactor:
    if grid.nx < 2 or grid.ny < 2:
        raise FieldError("Circulant embedding needs at least 2 points per axis")

    start_time = time.perf_counter()
    current = padding or 1
    while True:
        spectrum = _circulant_spectrum(grid, params, current)
        negative, negative_count, fraction = _clip(spectrum)
        if padding is not None or fraction < CLIP_TARGET or current >= max_padding:
            break
        current *= 2

    if fraction > clip_bound:
        raise EmbeddingError(
            f"Circulant embedding of {grid.nx}x{grid.ny} grid (r={params.r}) clips "
            f"{fraction:.3e} of the spectral mass at padding {current}; increase the padding"
        )
    if negative.any():
        logger.warning(
            f"Embedding {grid.nx}x{grid.ny} accepted with {int(negative.sum())} clipped "
            f"eigenvalues (fraction {fraction:.2e}, padding {current})"
        )

    m1, m2 = spectrum.shape
    sqrt_spectrum = np.sqrt(np.where(negative, 0.0, spectrum) / (m1 * m2))
    logger.debug(
        f"Built {m1}x{m2} circulant embedding in "
        f"{(time.perf_counter() - start_time) * 1000:.2f} ms"
    )
    return EmbeddingFactor(
        grid=grid,
        params=params,
        padding=current,
        sqrt_spectrum=sqrt_spectrum,
        negative_count=negative_count,
        clipped_count=int(negative.sum()),
        clipped_fraction=fraction,
    )


class CirculantEmbeddingSampler(FieldSampler):
    """Circulant embedding sampler; embeddings are cached per grid and params."""

    def __init__(
        self,
        padding: Optional[int] = None,
        clip_bound: float = EMBED_CLIP_BOUND,
        max_padding: int = EMBED_MAX_PADDING,
    ):
        if padding is not None and padding < 1:
            raise EmbeddingError(f"padding must be >= 1 (got {padding})")
        self.padding = padding
        self.clip_bound = clip_bound
        self.max_padding = max_padding

    @property
    def method_name(self) -> str:
        return "circulant"

    def embed(self, grid: TensorGrid, params: MaternParams) -> EmbeddingFactor:
        return _cached_embedding(grid, params, self.padding, self.clip_bound, self.max_padding)

    @staticmethod
    def draw(factor: EmbeddingFactor, rng: np.random.Generator) -> GridField:
        """One field from a fixed budget of 2 m1 m2 standard normals."""
        m1, m2 = factor.circulant_shape
        noise = rng.standard_normal((2, m1, m2))
        z = np.fft.fft2(factor.sqrt_spectrum * (noise[0] + 1j * noise[1]))
        nx, ny = factor.grid.shape
        return GridField(factor.grid, np.real(z[:nx, :ny]))

    def sample(self, grid: TensorGrid, params: MaternParams, rng: np.random.Generator) -> GridField:
        return self.draw(self.embed(grid, params), rng)

    def normal_budget(self, grid: TensorGrid, params: MaternParams) -> int:
        return self.embed(grid, params).normal_budget


class CholeskySampler(FieldSampler):
    """Exact dense sampler for small grids."""

    MAX_POINTS = 64 * 64

    @property
    def method_name(self) -> str:
        return "cholesky"

    def factor(self, grid: TensorGrid, params: MaternParams) -> np.ndarray:
        n = grid.nx * grid.ny
        if n > self.MAX_POINTS:
            raise FieldError(f"Cholesky sampling is limited to {self.MAX_POINTS} points (got {n})")
        cov = covariance_matrix(grid, params) + CHOLESKY_JITTER * np.eye(n)
        try:
            return np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as e:
            raise EmbeddingError(
                f"Covariance of {grid.nx}x{grid.ny} grid is not positive definite after jitter"
            ) from e

    def sample(self, grid: TensorGrid, params: MaternParams, rng: np.random.Generator) -> GridField:
        lower = self.factor(grid, params)
        noise = rng.standard_normal(grid.nx * grid.ny)
        return GridField(grid, (lower @ noise).reshape(grid.shape))

    def normal_budget(self, grid: TensorGrid, params: MaternParams) -> int:
        return grid.nx * grid.ny
