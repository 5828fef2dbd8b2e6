"""
Level Planning

Equilibrated per-level discretization parameters and sample numbers, and
variance-optimal sample numbers from pilot variance estimates.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from levy_mlmc.core.errors import ConfigurationError
from levy_mlmc.models import LevelParams, LevelPlan, MeshMode

logger = logging.getLogger(__name__)


def _ceil(value: float) -> int:
    return max(1, math.ceil(value - 1e-9))


def _check_hierarchy(h: Sequence[float]) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if h.ndim != 1 or h.size == 0:
        raise ConfigurationError("Need at least one mesh size")
    if np.any(h <= 0.0):
        raise ConfigurationError("Mesh sizes must be > 0")
    if np.any(np.diff(h) >= 0.0):
        raise ConfigurationError(f"Mesh sizes must decrease strictly (got {h.tolist()})")
    return h


def equilibrated_sample_numbers(
    h: Sequence[float], kappa: float = 1.0, xi: float = 0.1, c_m: float = 1.0
) -> np.ndarray:
    """Sample numbers before rounding.

    M_0 = C_M h_L^(-2 kappa) and M_l = C_M h_L^(-2 kappa) h_{l-1}^(2 kappa) (l + 1)^(2 (1 + xi)).
    """
    h = _check_hierarchy(h)
    if not xi > 0.0:
        raise ConfigurationError(f"xi must be > 0 (got {xi})")
    base = c_m * h[-1] ** (-2.0 * kappa)
    raw = np.empty_like(h)
    raw[0] = base
    levels = np.arange(1, h.size)
    raw[1:] = base * h[:-1] ** (2.0 * kappa) * (levels + 1.0) ** (2.0 * (1.0 + xi))
    return raw


def equilibrate(
    h: Sequence[float],
    kappa: float = 1.0,
    gamma: float = 1.0,
    c: float = 1.5,
    xi: float = 0.1,
    c_w: float = 1.0,
    c_l: float = 1.0,
    c_m: float = 1.0,
    mesh_mode: MeshMode = MeshMode.UNIFORM,
) -> LevelPlan:
    """Balance field, subordinator, mesh and sampling errors per level."""
    if not (kappa > 0.0 and gamma > 0.0):
        raise ConfigurationError(f"kappa and gamma must be > 0 (got {kappa}, {gamma})")
    if c < 1.0:
        raise ConfigurationError(f"c must be >= 1 (got {c})")
    h = _check_hierarchy(h)
    raw = equilibrated_sample_numbers(h, kappa, xi, c_m)
    levels = tuple(
        LevelParams(
            level=level,
            h=float(h_l),
            eps_w=float(c_w * h_l ** (kappa / gamma)),
            eps_l=float(c_l * h_l ** (2.0 * kappa * c)),
            samples=_ceil(m),
        )
        for level, (h_l, m) in enumerate(zip(h, raw))
    )
    plan = LevelPlan(levels, mesh_mode, kappa, gamma, c, xi)
    logger.info(f"Equilibrated {len(levels)} levels, samples {plan.samples}")
    return plan


@dataclass
class SampleAllocation:
    """Optimal sample numbers and their pre-rounding values."""
    samples: List[int]
    raw: np.ndarray
    all_zero: bool = False


def optimal_samples(variances: Sequence[float], h: Sequence[float]) -> SampleAllocation:
    """M_l = h_L^-2 sqrt(VAR_l) h_l sum_i sqrt(VAR_i) / h_i, rounded up, at least 1."""
    h = _check_hierarchy(h)
    var = np.asarray(variances, dtype=float)
    if var.shape != h.shape:
        raise ConfigurationError("One variance per level is required")
    if np.any(var < 0.0) or not np.all(np.isfinite(var)):
        raise ConfigurationError("Variances must be finite and >= 0")
    if not np.any(var > 0.0):
        logger.warning("All level variances are zero; using one sample per level")
        return SampleAllocation([1] * h.size, np.zeros_like(h), all_zero=True)
    root = np.sqrt(var)
    raw = h[-1] ** -2.0 * root * h * np.sum(root / h)
    return SampleAllocation([_ceil(m) for m in raw], raw)
