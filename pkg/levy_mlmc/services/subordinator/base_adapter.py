"""
Base Adapter for Subordinator Samplers

Abstract base class for Levy subordinator path samplers.
"""

from abc import ABC, abstractmethod

import numpy as np

from levy_mlmc.models import SubordinatorFamily, SubordinatorPath


class SubordinatorSampler(ABC):
    """Abstract sampler for subordinator paths on [0, D]."""

    @abstractmethod
    def sample(self, horizon: float, cells: int, rng: np.random.Generator) -> SubordinatorPath:
        """Draw one path; grid samplers use `cells` equidistant cells."""
        pass

    @property
    @abstractmethod
    def family(self) -> SubordinatorFamily:
        """Get the subordinator family this sampler draws from."""
        pass

    @property
    @abstractmethod
    def uses_grid(self) -> bool:
        """Whether the path is a grid approximation."""
        pass
