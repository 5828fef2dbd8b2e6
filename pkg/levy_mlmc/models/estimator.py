"""
Estimator Models

Level schedules, per-level statistics and estimator outputs.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from levy_mlmc.core.errors import ConfigurationError
from levy_mlmc.models.base import EstimatorKind, MeshMode
from levy_mlmc.models.field import GridField
from levy_mlmc.models.path import SubordinatorPath


def dyadic_cells(extent: float, eps: float) -> int:
    """Smallest power-of-two cell count with step extent / cells <= eps."""
    if not eps > 0.0:
        raise ConfigurationError(f"grid step must be > 0 (got {eps})")
    k = max(0, math.ceil(math.log2(extent / eps) - 1e-12))
    return 2 ** k


@dataclass(frozen=True)
class LevelParams:
    """Discretization parameters of one level."""
    level: int
    h: float         # h_l (uniform) or hbar_l (adapted)
    eps_w: float
    eps_l: float
    samples: int

    def __post_init__(self):
        if self.samples < 1:
            raise ConfigurationError(f"level {self.level}: samples must be >= 1")
        if not (self.h > 0.0 and self.eps_w > 0.0 and self.eps_l > 0.0):
            raise ConfigurationError(f"level {self.level}: h and eps must be > 0")

    def field_cells(self, extent: float) -> int:
        return dyadic_cells(extent, self.eps_w)

    def path_cells(self, horizon: float) -> int:
        return dyadic_cells(horizon, self.eps_l)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "h": self.h,
            "eps_w": self.eps_w,
            "eps_l": self.eps_l,
            "samples": self.samples,
        }


@dataclass(frozen=True)
class LevelPlan:
    """Per-level schedule l = 0..L plus the rates it was equilibrated with."""
    levels: Tuple[LevelParams, ...]
    mesh_mode: MeshMode = MeshMode.UNIFORM
    kappa: float = 1.0
    gamma: float = 1.0
    c: float = 1.5
    xi: float = 0.1

    def __post_init__(self):
        if not self.levels:
            raise ConfigurationError("LevelPlan needs at least one level")
        for index, params in enumerate(self.levels):
            if params.level != index:
                raise ConfigurationError("LevelPlan levels must be numbered 0..L in order")
        for coarse, fine in zip(self.levels, self.levels[1:]):
            if not (fine.h < coarse.h and fine.eps_w < coarse.eps_w and fine.eps_l < coarse.eps_l):
                raise ConfigurationError(
                    f"h, eps_w and eps_l must decrease strictly (level {fine.level})"
                )

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    @property
    def samples(self) -> List[int]:
        return [p.samples for p in self.levels]

    def level(self, index: int) -> LevelParams:
        return self.levels[index]

    def truncated(self, max_level: int) -> "LevelPlan":
        """The same plan restricted to levels 0..max_level."""
        return LevelPlan(
            self.levels[: max_level + 1], self.mesh_mode, self.kappa, self.gamma, self.c, self.xi
        )

    def with_samples(self, samples: List[int]) -> "LevelPlan":
        if len(samples) != len(self.levels):
            raise ConfigurationError("one sample count per level is required")
        levels = tuple(
            LevelParams(p.level, p.h, p.eps_w, p.eps_l, max(1, int(m)))
            for p, m in zip(self.levels, samples)
        )
        return LevelPlan(levels, self.mesh_mode, self.kappa, self.gamma, self.c, self.xi)

    def with_mesh_mode(self, mode: MeshMode) -> "LevelPlan":
        return LevelPlan(self.levels, mode, self.kappa, self.gamma, self.c, self.xi)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mesh_mode": self.mesh_mode.value,
            "kappa": self.kappa,
            "gamma": self.gamma,
            "c": self.c,
            "xi": self.xi,
            "levels": [p.to_dict() for p in self.levels],
        }


@dataclass(frozen=True, eq=False)
class SampleDraw:
    """All randomness of one sample at the resolution of `level`.

    Paths are raw (not yet rescaled or cut); coarser level views are derived
    from this draw by restriction.
    """
    level: int
    w1: GridField
    w2: GridField
    path_x: SubordinatorPath
    path_y: SubordinatorPath
    seed_id: str = ""


@dataclass
class LevelStats:
    """Statistics of one level's correction E_M(u_l - u_{l-1})."""
    level: int
    samples: int
    variance: float
    cost_seconds: float
    variance_defined: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "samples": self.samples,
            "variance": self.variance,
            "cost_seconds": self.cost_seconds,
            "variance_defined": self.variance_defined,
        }


@dataclass(eq=False)
class EstimatorResult:
    """Estimator output on the reference grid."""
    kind: EstimatorKind
    mean: GridField
    levels: List[LevelStats]
    seed_schedule: str
    plan: Optional[LevelPlan] = None
    flags: List[str] = field(default_factory=list)
    cv_mean: Optional["EstimatorResult"] = None

    @property
    def variances(self) -> List[float]:
        return [s.variance for s in self.levels]

    @property
    def samples(self) -> List[int]:
        return [s.samples for s in self.levels]

    @property
    def cost_seconds(self) -> float:
        own = sum(s.cost_seconds for s in self.levels)
        return own + (self.cv_mean.cost_seconds if self.cv_mean is not None else 0.0)

    def to_dict(self) -> Dict[str, Any]:
        """JSON summary (the mean field is written separately as CSV)."""
        return {
            "kind": self.kind.value,
            "seed_schedule": self.seed_schedule,
            "plan": None if self.plan is None else self.plan.to_dict(),
            "levels": [s.to_dict() for s in self.levels],
            "cost_seconds": self.cost_seconds,
            "flags": list(self.flags),
            "cv_mean": None if self.cv_mean is None else self.cv_mean.to_dict(),
        }


@dataclass
class RmseRow:
    """RMSE of one maximal level over independent runs."""
    level: int
    h: float
    rmse: float
    wallclock_seconds: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "h": self.h,
            "rmse": self.rmse,
            "wallclock_seconds": self.wallclock_seconds,
        }


@dataclass
class RmseTable:
    """Per-level RMSE table with the least-squares convergence rate."""
    rows: List[RmseRow]
    fitted_rate: float

    def to_dict(self) -> Dict[str, Any]:
        return {"rows": [r.to_dict() for r in self.rows], "fitted_rate": self.fitted_rate}
