"""
Random Field Service

Matern Gaussian random fields on tensor grids.
"""

from levy_mlmc.services.grf.service import (
    build_embedding,
    dump_field_csv,
    eval_field,
    get_field_sampler,
    matern_covariance,
    restrict_field,
    sample_grf,
    sample_grf_cholesky,
)
from levy_mlmc.services.grf.adapters import CholeskySampler, CirculantEmbeddingSampler
from levy_mlmc.services.grf.base_adapter import FieldSampler

__all__ = [
    "build_embedding",
    "dump_field_csv",
    "eval_field",
    "get_field_sampler",
    "matern_covariance",
    "restrict_field",
    "sample_grf",
    "sample_grf_cholesky",
    "CholeskySampler",
    "CirculantEmbeddingSampler",
    "FieldSampler",
]
