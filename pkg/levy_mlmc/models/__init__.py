"""
Centralized Model Imports

This module provides centralized access to all data models across the package.
Import from here instead of individual model files.
"""

# Base enums
from .base import (
    PathKind,
    SubordinatorFamily,
    SimulationMode,
    TransformKind,
    MeshMode,
    EstimatorKind,
    BoundarySide,
    SideFlag,
    NodeTag,
)

# Random field models
from .field import (
    MaternParams,
    TensorGrid,
    GridField,
    EmbeddingFactor,
)

# Subordinator models
from .path import (
    SubordinatorPath,
    SubordinatorSpec,
)

# Coefficient models
from .coefficient import (
    Transform,
    TransformSpec,
    CoefficientSample,
    SmoothedCoefficient,
)

# Finite element models
from .mesh import (
    BoundarySpec,
    Mesh,
    FESolution,
)

# Problem and estimator models
from .problem import ProblemSetup
from .estimator import (
    LevelParams,
    LevelPlan,
    SampleDraw,
    LevelStats,
    EstimatorResult,
    RmseRow,
    RmseTable,
)

# Experiment configuration
from .experiment import ExperimentConfig

__all__ = [
    # Base
    "PathKind",
    "SubordinatorFamily",
    "SimulationMode",
    "TransformKind",
    "MeshMode",
    "EstimatorKind",
    "BoundarySide",
    "SideFlag",
    "NodeTag",
    # Fields
    "MaternParams",
    "TensorGrid",
    "GridField",
    "EmbeddingFactor",
    # Paths
    "SubordinatorPath",
    "SubordinatorSpec",
    # Coefficient
    "Transform",
    "TransformSpec",
    "CoefficientSample",
    "SmoothedCoefficient",
    # FEM
    "BoundarySpec",
    "Mesh",
    "FESolution",
    # Estimators
    "ProblemSetup",
    "LevelParams",
    "LevelPlan",
    "SampleDraw",
    "LevelStats",
    "EstimatorResult",
    "RmseRow",
    "RmseTable",
    # Experiments
    "ExperimentConfig",
]
