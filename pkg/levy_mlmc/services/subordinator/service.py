"""
Subordinator Service

Simulation and manipulation of Levy subordinator paths: sampling, pointwise
evaluation, cutting at K, rescaling, coarsening onto nested grids, and the
tail probabilities used to choose K.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy.stats import gamma, poisson

from levy_mlmc.core.errors import PathError
from levy_mlmc.models import (
    PathKind,
    SimulationMode,
    SubordinatorFamily,
    SubordinatorPath,
    SubordinatorSpec,
)
from levy_mlmc.services.subordinator.adapters import (
    ExactPoissonSampler,
    GridGammaSampler,
    GridPoissonSampler,
)
from levy_mlmc.services.subordinator.base_adapter import SubordinatorSampler

logger = logging.getLogger(__name__)

# Relative slack for x in [0, D] checks
HORIZON_TOLERANCE = 1e-12


def grid_cells(horizon: float, eps_l: float) -> int:
    """Cells of the equidistant grid with step <= eps_l."""
    if not 0.0 < eps_l <= horizon * (1.0 + HORIZON_TOLERANCE):
        raise PathError(f"Grid step must lie in (0, D] (got {eps_l} for D={horizon})")
    return max(1, math.ceil(horizon / eps_l - 1e-9))


def sample_poisson_exact(lam: float, horizon: float, rng: np.random.Generator) -> SubordinatorPath:
    return ExactPoissonSampler(lam).sample(horizon, 1, rng)


def sample_poisson_grid(
    lam: float,
    horizon: float,
    eps_l: float,
    rng: np.random.Generator,
    cells: Optional[int] = None,
) -> SubordinatorPath:
    cells = cells or grid_cells(horizon, eps_l)
    return GridPoissonSampler(lam).sample(horizon, cells, rng)


def sample_gamma_grid(
    a: float,
    b: float,
    horizon: float,
    eps_l: float,
    rng: np.random.Generator,
    cells: Optional[int] = None,
) -> SubordinatorPath:
    cells = cells or grid_cells(horizon, eps_l)
    return GridGammaSampler(a, b).sample(horizon, cells, rng)


def get_path_sampler(spec: SubordinatorSpec) -> SubordinatorSampler:
    """Sampler for the subordinator's family and simulation mode."""
    if spec.family == SubordinatorFamily.POISSON:
        if spec.mode == SimulationMode.EXACT:
            return ExactPoissonSampler(spec.rate)
        return GridPoissonSampler(spec.rate)
    return GridGammaSampler(spec.shape, spec.rate)


def sample_path(
    spec: SubordinatorSpec,
    horizon: float,
    eps_l: float,
    rng: np.random.Generator,
    cells: Optional[int] = None,
) -> SubordinatorPath:
    """Draw a raw (unscaled, uncut) path in the configured mode."""
    sampler = get_path_sampler(spec)
    if sampler.uses_grid:
        cells = cells or grid_cells(horizon, eps_l)
    return sampler.sample(horizon, cells or 1, rng)


def eval_path(p: SubordinatorPath, x) -> np.ndarray:
    """Right-continuous evaluation at x in [0, D]."""
    x = np.asarray(x, dtype=float)
    tol = HORIZON_TOLERANCE * max(1.0, p.horizon)
    if x.size and (x.min() < -tol or x.max() > p.horizon + tol):
        raise PathError(f"Path evaluated outside [0, {p.horizon}]")
    levels = np.concatenate([[0.0], p.values])
    out = levels[np.searchsorted(p.jump_times, x, side="right")]
    return float(out) if out.ndim == 0 else out


def cut_path(p: SubordinatorPath, K: float) -> SubordinatorPath:
    """Pointwise min(l(x), K); jump times are kept."""
    if not K > 0.0:
        raise PathError(f"Cut level must be > 0 (got {K})")
    return SubordinatorPath(
        horizon=p.horizon,
        jump_times=p.jump_times,
        values=np.minimum(p.values, K),
        kind=p.kind,
        grid_values=None if p.grid_values is None else np.minimum(p.grid_values, K),
    )


def rescale_path(p: SubordinatorPath, rho: float) -> SubordinatorPath:
    """Values times rho; jump times are kept."""
    if not rho > 0.0:
        raise PathError(f"Rescale factor must be > 0 (got {rho})")
    if rho == 1.0:
        return p
    return SubordinatorPath(
        horizon=p.horizon,
        jump_times=p.jump_times,
        values=p.values * rho,
        kind=p.kind,
        grid_values=None if p.grid_values is None else p.grid_values * rho,
    )


def coarsen_path(
    p: SubordinatorPath,
    eps_coarse: Optional[float] = None,
    cells: Optional[int] = None,
) -> SubordinatorPath:
    """Restrict a grid approximation to a nested coarser grid and re-extend."""
    if p.kind != PathKind.GRID_APPROX:
        raise PathError("Only grid approximations can be coarsened")
    if cells is None:
        if eps_coarse is None:
            raise PathError("coarsen_path needs eps_coarse or cells")
        cells = grid_cells(p.horizon, eps_coarse)
    fine_cells = p.grid_cells
    if cells > fine_cells or fine_cells % cells != 0:
        raise PathError(f"Grid with {cells} cells is not nested in grid with {fine_cells} cells")
    if cells == fine_cells:
        return p
    stride = fine_cells // cells
    return SubordinatorPath.from_grid_values(p.horizon, p.grid_values[::stride])


def exceedance_probability(spec: SubordinatorSpec, K: float, horizon: float = 1.0) -> float:
    """P(rho l(D) > K), the probability that cutting at K changes a path."""
    if not K > 0.0:
        raise PathError(f"Cut level must be > 0 (got {K})")
    threshold = K / spec.rescale
    if spec.family == SubordinatorFamily.POISSON:
        return float(poisson.sf(math.floor(threshold + 1e-9), spec.rate * horizon))
    return float(gamma.sf(threshold, spec.shape * horizon, scale=1.0 / spec.rate))
