"""
Error Types

Exception hierarchy shared by all services. Every error raised on purpose
by this package derives from LevyMlmcError so the CLI can report it in one
line.
"""

from typing import Optional


class LevyMlmcError(Exception):
    """Base class for all package errors."""


class ConfigurationError(LevyMlmcError):
    """Invalid experiment or process configuration."""


class FieldError(LevyMlmcError):
    """Invalid grid, field, or out-of-box field query."""


class EmbeddingError(LevyMlmcError):
    """Circulant embedding too small or covariance not positive definite."""


class PathError(LevyMlmcError):
    """Invalid subordinator path or path operation."""


class CoefficientError(LevyMlmcError):
    """Invalid diffusion coefficient data or evaluation."""


class MeshError(LevyMlmcError):
    """Invalid triangulation or point location failure."""


class SolverError(LevyMlmcError):
    """Linear solve failed (non-convergence or non-positive pivot)."""

    def __init__(self, message: str, iterations: Optional[int] = None):
        super().__init__(message)
        self.iterations = iterations


class EstimatorError(LevyMlmcError):
    """A pathwise sample failed inside an estimator run."""

    def __init__(self, message: str, seed_schedule: Optional[str] = None):
        if seed_schedule is not None:
            message = f"{message} [seed schedule {seed_schedule}]"
        super().__init__(message)
        self.seed_schedule = seed_schedule
