"""
Field Models

Data models for Matern Gaussian random fields sampled on rectangular tensor
grids.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from levy_mlmc.core.errors import FieldError

# Relative slack for "inside the box" checks on floating point coordinates
BOX_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MaternParams:
    """Matern covariance parameters (smoothness, correlation length, variance)."""
    nu: float
    r: float
    sigma2: float

    def __post_init__(self):
        if not self.nu > 0.5:
            raise FieldError(f"MaternParams.nu must be > 0.5 (got {self.nu})")
        if not self.r > 0.0:
            raise FieldError(f"MaternParams.r must be > 0 (got {self.r})")
        if not self.sigma2 > 0.0:
            raise FieldError(f"MaternParams.sigma2 must be > 0 (got {self.sigma2})")


@dataclass(frozen=True)
class TensorGrid:
    """Equidistant tensor grid on [x0, x1] x [y0, y1].

    An axis with a single point is degenerate and must have zero length.
    """
    x0: float
    x1: float
    y0: float
    y1: float
    nx: int
    ny: int

    def __post_init__(self):
        for name, n, lo, hi in (("x", self.nx, self.x0, self.x1), ("y", self.ny, self.y0, self.y1)):
            if n < 1:
                raise FieldError(f"TensorGrid.n{name} must be >= 1 (got {n})")
            if n == 1 and hi != lo:
                raise FieldError(f"TensorGrid axis {name} has one point but nonzero length")
            if n > 1 and not hi > lo:
                raise FieldError(f"TensorGrid.{name}1 must exceed {name}0")

    @classmethod
    def square(cls, extent: float, cells: int) -> "TensorGrid":
        """Grid on [0, extent]^2 with `cells` cells per axis."""
        return cls(0.0, extent, 0.0, extent, cells + 1, cells + 1)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nx, self.ny)

    @cached_property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    @cached_property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y0, self.y1, self.ny)

    @property
    def dx(self) -> float:
        return (self.x1 - self.x0) / (self.nx - 1) if self.nx > 1 else 0.0

    @property
    def dy(self) -> float:
        return (self.y1 - self.y0) / (self.ny - 1) if self.ny > 1 else 0.0

    @property
    def spacing(self) -> float:
        """Maximum step size (the grid's epsilon_W)."""
        return max(self.dx, self.dy)

    def meshgrid(self) -> Tuple[np.ndarray, np.ndarray]:
        """Node coordinates as two (nx, ny) arrays."""
        return np.meshgrid(self.xs, self.ys, indexing="ij")

    def points(self) -> np.ndarray:
        """Node coordinates as an (nx*ny, 2) array in values.ravel() order."""
        gx, gy = self.meshgrid()
        return np.column_stack([gx.ravel(), gy.ravel()])

    def stride_from(self, fine: "TensorGrid") -> Tuple[int, int]:
        """Index strides that restrict `fine` onto this grid.

        Raises FieldError when this grid is not a nested sub-grid of `fine`.
        """
        if (self.x0, self.x1, self.y0, self.y1) != (fine.x0, fine.x1, fine.y0, fine.y1):
            raise FieldError("Grids cover different boxes and cannot be nested")
        strides = []
        for n_coarse, n_fine in ((self.nx, fine.nx), (self.ny, fine.ny)):
            if n_coarse == 1 and n_fine == 1:
                strides.append(1)
                continue
            cells_coarse, cells_fine = n_coarse - 1, n_fine - 1
            if cells_coarse < 1 or cells_fine % cells_coarse != 0:
                raise FieldError(
                    f"Grid with {n_coarse} points is not nested in grid with {n_fine} points"
                )
            strides.append(cells_fine // cells_coarse)
        return strides[0], strides[1]


@dataclass(frozen=True, eq=False)
class GridField:
    """Real-valued field sampled on a tensor grid, evaluated bilinearly."""
    grid: TensorGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise FieldError(
                f"GridField values have shape {values.shape}, grid expects {self.grid.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise FieldError("GridField values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: TensorGrid) -> "GridField":
        return cls(grid, np.zeros(grid.shape))

    @cached_property
    def _interpolator(self) -> RegularGridInterpolator:
        axes, values = [], self.values
        if self.grid.nx > 1:
            axes.append(self.grid.xs)
        else:
            values = values[0, :]
        if self.grid.ny > 1:
            axes.append(self.grid.ys)
        else:
            values = values[..., 0]
        return RegularGridInterpolator(tuple(axes), values, method="linear")

    def evaluate(self, x, y) -> np.ndarray:
        """Bilinear interpolation at (x, y); queries must lie in the closed box."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        g = self.grid
        tol_x = BOX_TOLERANCE * max(1.0, abs(g.x1), abs(g.x0))
        tol_y = BOX_TOLERANCE * max(1.0, abs(g.y1), abs(g.y0))
        if x.size and (
            x.min() < g.x0 - tol_x or x.max() > g.x1 + tol_x
            or y.min() < g.y0 - tol_y or y.max() > g.y1 + tol_y
        ):
            raise FieldError(
                f"Query outside field box [{g.x0}, {g.x1}] x [{g.y0}, {g.y1}]"
            )
        if g.nx == 1 and g.ny == 1:
            return np.full(x.shape, self.values[0, 0])
        coords = []
        if g.nx > 1:
            coords.append(np.clip(x, g.x0, g.x1).ravel())
        if g.ny > 1:
            coords.append(np.clip(y, g.y0, g.y1).ravel())
        if len(coords) == 1:
            out = self._interpolator(coords[0][:, None])
        else:
            out = self._interpolator(np.column_stack(coords))
        return out.reshape(x.shape)


@dataclass(frozen=True, eq=False)
class EmbeddingFactor:
    """Square-root spectrum of a block-circulant covariance embedding."""
    grid: TensorGrid
    params: MaternParams
    padding: int
    sqrt_spectrum: np.ndarray  # sqrt(lambda / N), shape (m1, m2)
    negative_count: int        # eigenvalues below -tol_embed
    clipped_count: int         # all eigenvalues zeroed
    clipped_fraction: float    # clipped mass / total absolute mass

    def __post_init__(self):
        if np.any(self.sqrt_spectrum < 0) or not np.all(np.isfinite(self.sqrt_spectrum)):
            raise FieldError("EmbeddingFactor spectrum must be finite and nonnegative")

    @property
    def circulant_shape(self) -> Tuple[int, int]:
        return self.sqrt_spectrum.shape

    @property
    def normal_budget(self) -> int:
        """Standard normal variates consumed by one sample."""
        m1, m2 = self.circulant_shape
        return 2 * m1 * m2

    def report(self) -> dict:
        return {
            "padding": self.padding,
            "circulant_shape": list(self.circulant_shape),
            "negative_count": self.negative_count,
            "clipped_count": self.clipped_count,
            "clipped_fraction": self.clipped_fraction,
        }
