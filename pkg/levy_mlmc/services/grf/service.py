"""
Random Field Service

Module-level operations on Matern Gaussian random fields: covariance,
embedding, sampling, evaluation, restriction to nested grids, CSV dump.
"""

import csv
import logging
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from levy_mlmc.core.env import EMBED_CLIP_BOUND
from levy_mlmc.core.errors import ConfigurationError
from levy_mlmc.models import EmbeddingFactor, GridField, MaternParams, TensorGrid
from levy_mlmc.services.grf.adapters import CholeskySampler, CirculantEmbeddingSampler
from levy_mlmc.services.grf.base_adapter import FieldSampler
from levy_mlmc.services.grf.covariance import matern_covariance

logger = logging.getLogger(__name__)

_SAMPLERS: Dict[str, FieldSampler] = {
    "circulant": CirculantEmbeddingSampler(),
    "cholesky": CholeskySampler(),
}


def get_field_sampler(method: str = "circulant") -> FieldSampler:
    """Look up a registered field sampler by name."""
    try:
        return _SAMPLERS[method]
    except KeyError:
        raise ConfigurationError(
            f"Unknown field sampler '{method}' (available: {', '.join(sorted(_SAMPLERS))})"
        ) from None


def build_embedding(
    grid: TensorGrid,
    p: MaternParams,
    padding: Optional[int] = None,
    clip_bound: float = EMBED_CLIP_BOUND,
) -> EmbeddingFactor:
    """Circulant embedding factor; `padding=None` grows the padding automatically."""
    return CirculantEmbeddingSampler(padding=padding, clip_bound=clip_bound).embed(grid, p)


def sample_grf(factor: EmbeddingFactor, rng: np.random.Generator) -> GridField:
    return CirculantEmbeddingSampler.draw(factor, rng)


def sample_grf_cholesky(grid: TensorGrid, p: MaternParams, rng: np.random.Generator) -> GridField:
    return _SAMPLERS["cholesky"].sample(grid, p, rng)


def eval_field(f: GridField, x, y) -> np.ndarray:
    """Bilinear evaluation; out-of-box queries raise FieldError."""
    return f.evaluate(x, y)


def restrict_field(f: GridField, grid: TensorGrid) -> GridField:
    """Exact restriction of `f` onto a nested coarser grid."""
    sx, sy = grid.stride_from(f.grid)
    return GridField(grid, f.values[::sx, ::sy])


def dump_field_csv(f: GridField, path: Union[str, Path]) -> Path:
    """Write `x,y,value` rows, y outer and x inner, 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    xs, ys = f.grid.xs, f.grid.ys
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["x", "y", "value"])
        for j, y in enumerate(ys):
            for i, x in enumerate(xs):
                writer.writerow([f"{x:.17g}", f"{y:.17g}", f"{f.values[i, j]:.17g}"])
    logger.info(f"Wrote {f.grid.nx}x{f.grid.ny} field to {path}")
    return path


__all__ = [
    "matern_covariance",
    "build_embedding",
    "sample_grf",
    "sample_grf_cholesky",
    "eval_field",
    "restrict_field",
    "dump_field_csv",
    "get_field_sampler",
]
