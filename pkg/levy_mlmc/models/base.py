"""
Base Models and Common Enums

Shared enums used across the application.
"""

from enum import Enum, IntFlag


class PathKind(str, Enum):
    """How a subordinator path was produced."""
    EXACT_POISSON = "exact-poisson"
    GRID_APPROX = "grid-approx"


class SubordinatorFamily(str, Enum):
    """Supported Levy subordinator families."""
    POISSON = "poisson"
    GAMMA = "gamma"


class SimulationMode(str, Enum):
    """Subordinator simulation mode."""
    EXACT = "exact"  # Uniform Method, Poisson only
    GRID = "grid"    # grid increments with piecewise constant extension


class TransformKind(str, Enum):
    """Families for the transforms Phi_1 and Phi_2."""
    SCALED_EXP = "scaled-exp"
    SCALED_ABS = "scaled-abs"
    TABLE = "table"


class MeshMode(str, Enum):
    """Triangulation strategy per level."""
    UNIFORM = "uniform"
    ADAPTED = "adapted"


class EstimatorKind(str, Enum):
    """Estimator flavours."""
    SLMC = "slmc"
    MLMC = "mlmc"
    MLMC_CV = "mlmc-cv"


class BoundarySide(str, Enum):
    """Sides of the unit square."""
    LEFT = "left"      # x = 0
    RIGHT = "right"    # x = 1
    BOTTOM = "bottom"  # y = 0
    TOP = "top"        # y = 1


class SideFlag(IntFlag):
    """Bitmask of the domain sides a mesh node lies on."""
    NONE = 0
    LEFT = 1
    RIGHT = 2
    BOTTOM = 4
    TOP = 8

    @classmethod
    def of(cls, side: BoundarySide) -> "SideFlag":
        return cls[side.name]


class NodeTag(int, Enum):
    """Boundary role of a mesh node under a given BoundarySpec."""
    INTERIOR = 0
    DIRICHLET = 1
    NEUMANN = 2
