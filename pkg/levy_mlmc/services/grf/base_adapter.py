"""
Base Adapter for Random Field Samplers

Abstract base class for Gaussian random field samplers.
"""

from abc import ABC, abstractmethod

import numpy as np

from levy_mlmc.models import GridField, MaternParams, TensorGrid


class FieldSampler(ABC):
    """Abstract sampler for zero-mean Matern fields on tensor grids."""

    @abstractmethod
    def sample(self, grid: TensorGrid, params: MaternParams, rng: np.random.Generator) -> GridField:
        """Draw one field on `grid`."""
        pass

    @abstractmethod
    def normal_budget(self, grid: TensorGrid, params: MaternParams) -> int:
        """Standard normal variates one sample consumes."""
        pass

    @property
    @abstractmethod
    def method_name(self) -> str:
        """Get the name of this sampling method."""
        pass
