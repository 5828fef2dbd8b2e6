"""
Subordinator Sampler Adapters

Concrete samplers: exact Poisson paths by the uniform method, and grid
approximations of Poisson and Gamma subordinators by independent increments.
"""

import numpy as np

from levy_mlmc.core.errors import PathError
from levy_mlmc.models import PathKind, SubordinatorFamily, SubordinatorPath
from levy_mlmc.services.subordinator.base_adapter import SubordinatorSampler


def _grid_step(horizon: float, cells: int) -> float:
    if cells < 1:
        raise PathError(f"Grid approximations need at least one cell (got {cells})")
    if not horizon > 0.0:
        raise PathError(f"Path horizon must be > 0 (got {horizon})")
    return horizon / cells


class ExactPoissonSampler(SubordinatorSampler):
    """N ~ Poisson(lambda D) unit jumps at sorted uniform times."""

    def __init__(self, rate: float):
        if not rate > 0.0:
            raise PathError(f"Poisson rate must be > 0 (got {rate})")
        self.rate = rate

    @property
    def family(self) -> SubordinatorFamily:
        return SubordinatorFamily.POISSON

    @property
    def uses_grid(self) -> bool:
        return False

    def sample(self, horizon: float, cells: int, rng: np.random.Generator) -> SubordinatorPath:
        if not horizon > 0.0:
            raise PathError(f"Path horizon must be > 0 (got {horizon})")
        count = int(rng.poisson(self.rate * horizon))
        # D - U lies in (0, D]
        times = np.sort(horizon - rng.uniform(0.0, horizon, size=count))
        return SubordinatorPath(
            horizon=horizon,
            jump_times=times,
            values=np.arange(1, count + 1, dtype=float),
            kind=PathKind.EXACT_POISSON,
        )


class GridPoissonSampler(SubordinatorSampler):
    """Poisson(lambda dx) increments on an equidistant grid."""

    def __init__(self, rate: float):
        if not rate > 0.0:
            raise PathError(f"Poisson rate must be > 0 (got {rate})")
        self.rate = rate

    @property
    def family(self) -> SubordinatorFamily:
        return SubordinatorFamily.POISSON

    @property
    def uses_grid(self) -> bool:
        return True

    def sample(self, horizon: float, cells: int, rng: np.random.Generator) -> SubordinatorPath:
        dx = _grid_step(horizon, cells)
        increments = rng.poisson(self.rate * dx, size=cells).astype(float)
        return SubordinatorPath.from_grid_values(horizon, np.concatenate([[0.0], np.cumsum(increments)]))


class GridGammaSampler(SubordinatorSampler):
    """Gamma(a dx, rate b) increments on an equidistant grid."""

    def __init__(self, shape: float, rate: float):
        if not (shape > 0.0 and rate > 0.0):
            raise PathError(f"Gamma shape and rate must be > 0 (got {shape}, {rate})")
        self.shape = shape
        self.rate = rate

    @property
    def family(self) -> SubordinatorFamily:
        return SubordinatorFamily.GAMMA

    @property
    def uses_grid(self) -> bool:
        return True

    def sample(self, horizon: float, cells: int, rng: np.random.Generator) -> SubordinatorPath:
        dx = _grid_step(horizon, cells)
        increments = rng.gamma(self.shape * dx, 1.0 / self.rate, size=cells)
        return SubordinatorPath.from_grid_values(horizon, np.concatenate([[0.0], np.cumsum(increments)]))
