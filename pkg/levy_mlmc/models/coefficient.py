"""
Coefficient Models

Data models for the jump diffusion coefficient a_{K,A} built from two Matern
fields and two subordinator paths, and for its kernel-smoothed counterpart.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

import numpy as np

from levy_mlmc.core.errors import CoefficientError
from levy_mlmc.models.base import TransformKind
from levy_mlmc.models.field import GridField
from levy_mlmc.models.path import SubordinatorPath

MeanFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Transform:
    """A transform Phi: R -> [0, inf).

    scaled-exp is scale * exp(z), scaled-abs is scale * |z|, table is a
    piecewise linear interpolant through (table_x, table_y), held constant
    outside the table.
    """
    kind: TransformKind
    scale: float = 1.0
    table_x: Tuple[float, ...] = ()
    table_y: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == TransformKind.TABLE:
            if len(self.table_x) < 2 or len(self.table_x) != len(self.table_y):
                raise CoefficientError("Table transforms need matching table_x/table_y (>= 2 points)")
            if np.any(np.diff(self.table_x) <= 0):
                raise CoefficientError("Transform.table_x must be strictly increasing")
        elif self.scale < 0.0:
            raise CoefficientError(f"Transform.scale must be >= 0 (got {self.scale})")

    @classmethod
    def zero(cls) -> "Transform":
        return cls(TransformKind.SCALED_ABS, 0.0)

    def apply(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if self.kind == TransformKind.SCALED_EXP:
            out = self.scale * np.exp(z)
        elif self.kind == TransformKind.SCALED_ABS:
            out = self.scale * np.abs(z)
        else:
            out = np.interp(z, self.table_x, self.table_y)
        if np.any(out < 0.0) or not np.all(np.isfinite(out)):
            raise CoefficientError(f"{self.kind.value} transform left [0, inf) on sampled arguments")
        return out


@dataclass(frozen=True)
class TransformSpec:
    """Mean field abar plus the transforms Phi_1 and Phi_2.

    `abar` is a constant or a callable abar(x, y); callables must declare
    their bounds abar_- and abar_+.
    """
    phi1: Transform
    phi2: Transform
    abar: Union[float, MeanFunction] = 0.1
    abar_bounds: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if callable(self.abar):
            if self.abar_bounds is None:
                raise CoefficientError("Callable abar needs abar_bounds=(abar_-, abar_+)")
            bounds = self.abar_bounds
        else:
            bounds = (float(self.abar), float(self.abar))
        if not 0.0 < bounds[0] <= bounds[1]:
            raise CoefficientError(f"abar bounds must satisfy 0 < abar_- <= abar_+ (got {bounds})")
        object.__setattr__(self, "abar_bounds", bounds)

    @property
    def abar_lower(self) -> float:
        return self.abar_bounds[0]

    @property
    def abar_upper(self) -> float:
        return self.abar_bounds[1]

    def mean_at(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if callable(self.abar):
            values = np.asarray(self.abar(x, y), dtype=float)
            lo, hi = self.abar_bounds
            if np.any(values < lo) or np.any(values > hi):
                raise CoefficientError("abar(x, y) left its declared bounds")
            return np.broadcast_to(values, np.broadcast(x, y).shape)
        return np.full(np.broadcast(x, y).shape, float(self.abar))


@dataclass(frozen=True, eq=False)
class CoefficientSample:
    """One realization of a_{K,A}: fields, cut paths, thresholds, transforms."""
    w1: GridField
    w2: GridField
    path_x: SubordinatorPath
    path_y: SubordinatorPath
    cut_level: float          # K
    cap: float                # A
    transforms: TransformSpec
    domain: float = 1.0       # D, the side of the square domain

    def __post_init__(self):
        if not self.cut_level > 0.0:
            raise CoefficientError(f"CoefficientSample.cut_level must be > 0 (got {self.cut_level})")
        if not self.cap > 0.0:
            raise CoefficientError(f"CoefficientSample.cap must be > 0 (got {self.cap})")
        for name, path in (("path_x", self.path_x), ("path_y", self.path_y)):
            if path.max_level > self.cut_level:
                raise CoefficientError(f"{name} exceeds the cut level K={self.cut_level}")
            if path.horizon != self.domain:
                raise CoefficientError(f"{name} horizon differs from the domain size")
        g = self.w2.grid
        if g.x0 > 0.0 or g.y0 > 0.0 or g.x1 < self.cut_level or g.y1 < self.cut_level:
            raise CoefficientError("w2 grid must cover [0, K]^2")

    @property
    def lower_bound(self) -> float:
        return min(self.transforms.abar_lower, self.cap)


@dataclass(frozen=True, eq=False)
class SmoothedCoefficient:
    """Gaussian-kernel smoothing of a coefficient raster."""
    base: GridField
    nu_s: float
    smoothed: GridField
    kernel_mass: float = field(default=float("nan"))

    def evaluate(self, x, y) -> np.ndarray:
        return self.smoothed.evaluate(x, y)
