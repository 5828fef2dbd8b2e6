"""
Subordinator Path Models

Data models for nondecreasing piecewise constant Levy subordinator paths on
[0, D] and the parameters that say how to simulate them.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from levy_mlmc.core.errors import PathError
from levy_mlmc.models.base import PathKind, SimulationMode, SubordinatorFamily


@dataclass(frozen=True, eq=False)
class SubordinatorPath:
    """Right-continuous step path starting at 0.

    The level after the k-th jump is values[k]; before the first jump the
    path is 0. Grid approximations also keep their grid values
    l(x_0), ..., l(x_N) so they can be restricted to coarser nested grids.
    """
    horizon: float
    jump_times: np.ndarray
    values: np.ndarray
    kind: PathKind
    grid_values: Optional[np.ndarray] = None

    def __post_init__(self):
        times = np.array(self.jump_times, dtype=float).reshape(-1)
        values = np.array(self.values, dtype=float).reshape(-1)
        if not self.horizon > 0.0:
            raise PathError(f"SubordinatorPath.horizon must be > 0 (got {self.horizon})")
        if times.shape != values.shape:
            raise PathError("SubordinatorPath.jump_times and values differ in length")
        if times.size:
            if np.any(np.diff(times) <= 0.0):
                raise PathError("SubordinatorPath.jump_times must be strictly increasing")
            if times[0] <= 0.0 or times[-1] > self.horizon:
                raise PathError("SubordinatorPath.jump_times must lie in (0, horizon]")
            if not np.all(np.isfinite(values)) or values[0] < 0.0:
                raise PathError("SubordinatorPath.values must be finite and >= 0")
            if np.any(np.diff(values) < 0.0):
                raise PathError("SubordinatorPath.values must be nondecreasing")
        times.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "jump_times", times)
        object.__setattr__(self, "values", values)

        if self.grid_values is not None:
            grid_values = np.array(self.grid_values, dtype=float).reshape(-1)
            if grid_values.size < 2 or grid_values[0] != 0.0:
                raise PathError("SubordinatorPath.grid_values must start at 0 with >= 2 nodes")
            if np.any(np.diff(grid_values) < 0.0):
                raise PathError("SubordinatorPath.grid_values must be nondecreasing")
            grid_values.flags.writeable = False
            object.__setattr__(self, "grid_values", grid_values)
        elif self.kind == PathKind.GRID_APPROX:
            raise PathError("Grid approximations must carry their grid values")

    @classmethod
    def from_grid_values(cls, horizon: float, grid_values: np.ndarray) -> "SubordinatorPath":
        """Piecewise constant extension of grid values l(x_0), ..., l(x_N).

        The value on [x_i, x_{i+1}) is l(x_i) and the value at x = D is
        l(x_{N-1}), so the last increment never enters the path.
        """
        grid_values = np.asarray(grid_values, dtype=float)
        cells = grid_values.size - 1
        if cells < 1:
            raise PathError("Grid approximations need at least one cell")
        nodes = np.linspace(0.0, horizon, cells + 1)
        inner = grid_values[: cells]
        rises = np.flatnonzero(np.diff(inner) > 0.0) + 1
        return cls(
            horizon=horizon,
            jump_times=nodes[rises],
            values=inner[rises],
            kind=PathKind.GRID_APPROX,
            grid_values=grid_values,
        )

    @property
    def grid_cells(self) -> Optional[int]:
        """Number of grid cells N_l for grid approximations."""
        return None if self.grid_values is None else self.grid_values.size - 1

    @property
    def jump_count(self) -> int:
        return int(self.jump_times.size)

    @property
    def max_level(self) -> float:
        return float(self.values[-1]) if self.values.size else 0.0

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a JSON-friendly dictionary."""
        return {
            "horizon": self.horizon,
            "jump_times": self.jump_times.tolist(),
            "values": self.values.tolist(),
            "kind": self.kind.value,
            "grid_values": None if self.grid_values is None else self.grid_values.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SubordinatorPath":
        """Create from dictionary format."""
        return cls(
            horizon=float(data["horizon"]),
            jump_times=np.asarray(data.get("jump_times", []), dtype=float),
            values=np.asarray(data.get("values", []), dtype=float),
            kind=PathKind(data["kind"]),
            grid_values=data.get("grid_values"),
        )


@dataclass(frozen=True)
class SubordinatorSpec:
    """How to simulate one subordinator.

    Poisson uses `rate` (lambda); Gamma uses `shape` (a) and `rate` (b), so
    an increment over length dx is Gamma(a * dx, rate b).
    """
    family: SubordinatorFamily
    rate: float
    shape: Optional[float] = None
    mode: SimulationMode = SimulationMode.GRID
    rescale: float = 1.0

    def __post_init__(self):
        if not self.rate > 0.0:
            raise PathError(f"SubordinatorSpec.rate must be > 0 (got {self.rate})")
        if self.family == SubordinatorFamily.GAMMA:
            if self.shape is None or not self.shape > 0.0:
                raise PathError("Gamma subordinators need SubordinatorSpec.shape > 0")
            if self.mode == SimulationMode.EXACT:
                raise PathError("Gamma subordinators can only be simulated on a grid")
        if not self.rescale > 0.0:
            raise PathError(f"SubordinatorSpec.rescale must be > 0 (got {self.rescale})")

    @property
    def needs_grid(self) -> bool:
        return self.mode == SimulationMode.GRID
