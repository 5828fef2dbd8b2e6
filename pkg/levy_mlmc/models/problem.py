"""
Problem Models

The pathwise elliptic problem: coefficient ingredients, thresholds, boundary
data and the reference grid all estimators report on.
"""

from dataclasses import dataclass, field

from levy_mlmc.core.env import REFERENCE_POINTS
from levy_mlmc.core.errors import ConfigurationError
from levy_mlmc.models.coefficient import TransformSpec
from levy_mlmc.models.field import MaternParams, TensorGrid
from levy_mlmc.models.mesh import BoundarySpec
from levy_mlmc.models.path import SubordinatorSpec


def default_reference_grid() -> TensorGrid:
    return TensorGrid.square(1.0, REFERENCE_POINTS - 1)


@dataclass(frozen=True)
class ProblemSetup:
    """Everything needed to draw and solve one sample of the problem."""
    transforms: TransformSpec
    w1: MaternParams
    w2: MaternParams
    subordinator: SubordinatorSpec
    cut_level: float                 # K, applied after rescaling
    cap: float = 100.0               # A
    boundary: BoundarySpec = field(default_factory=BoundarySpec)
    reference_grid: TensorGrid = field(default_factory=default_reference_grid)
    domain: float = 1.0

    def __post_init__(self):
        if not self.cut_level > 0.0:
            raise ConfigurationError(f"cut_level must be > 0 (got {self.cut_level})")
        if not self.cap > 0.0:
            raise ConfigurationError(f"cap must be > 0 (got {self.cap})")
        g = self.reference_grid
        if (g.x0, g.y0) != (0.0, 0.0) or (g.x1, g.y1) != (self.domain, self.domain):
            raise ConfigurationError("reference grid must cover the whole domain")
