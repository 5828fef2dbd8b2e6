"""
Subordinator Service

Poisson and Gamma subordinator paths for the subordinated random field.
"""

from levy_mlmc.services.subordinator.service import (
    coarsen_path,
    cut_path,
    eval_path,
    exceedance_probability,
    get_path_sampler,
    grid_cells,
    rescale_path,
    sample_gamma_grid,
    sample_path,
    sample_poisson_exact,
    sample_poisson_grid,
)
from levy_mlmc.services.subordinator.adapters import (
    ExactPoissonSampler,
    GridGammaSampler,
    GridPoissonSampler,
)
from levy_mlmc.services.subordinator.base_adapter import SubordinatorSampler

__all__ = [
    "coarsen_path",
    "cut_path",
    "eval_path",
    "exceedance_probability",
    "get_path_sampler",
    "grid_cells",
    "rescale_path",
    "sample_gamma_grid",
    "sample_path",
    "sample_poisson_exact",
    "sample_poisson_grid",
    "ExactPoissonSampler",
    "GridGammaSampler",
    "GridPoissonSampler",
    "SubordinatorSampler",
]
