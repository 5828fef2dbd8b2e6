"""
Coefficient Builder Service

Assembles the jump coefficient a_{K,A} from fields and subordinator paths,
evaluates it pointwise, extracts its jump lines for mesh alignment, and
produces the Gaussian-smoothed coefficient used as a control variate.
"""

import logging
import time
from functools import partial
from typing import Callable, Tuple

import numpy as np
from scipy.signal import fftconvolve

from levy_mlmc.core.errors import CoefficientError
from levy_mlmc.models import (
    CoefficientSample,
    GridField,
    SmoothedCoefficient,
    SubordinatorPath,
    TensorGrid,
    TransformSpec,
)
from levy_mlmc.services.subordinator import cut_path, eval_path, rescale_path

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]

# Kernel support radius in units of nu_s
KERNEL_RADIUS = 4.0


def build_coefficient(
    w1: GridField,
    w2: GridField,
    path_x: SubordinatorPath,
    path_y: SubordinatorPath,
    transforms: TransformSpec,
    cut_level: float,
    cap: float = 100.0,
    rescale: float = 1.0,
) -> CoefficientSample:
    """Bundle raw paths into a sample: rescale first, then cut at K."""
    cut_x = cut_path(rescale_path(path_x, rescale), cut_level)
    cut_y = cut_path(rescale_path(path_y, rescale), cut_level)
    return CoefficientSample(
        w1=w1,
        w2=w2,
        path_x=cut_x,
        path_y=cut_y,
        cut_level=cut_level,
        cap=cap,
        transforms=transforms,
        domain=path_x.horizon,
    )


def eval_coefficient(c: CoefficientSample, x, y) -> np.ndarray:
    """min(abar + Phi_1(W_1(x, y)) + Phi_2(W_2(l_1(x), l_2(y))), A)."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    level_x = eval_path(c.path_x, x)
    level_y = eval_path(c.path_y, y)
    if np.any(level_x > c.cut_level) or np.any(level_y > c.cut_level):
        raise CoefficientError(f"Cut path value exceeds K={c.cut_level}")
    t = c.transforms
    value = t.mean_at(x, y) + t.phi1.apply(c.w1.evaluate(x, y)) + t.phi2.apply(c.w2.evaluate(level_x, level_y))
    return np.minimum(value, c.cap)


def coefficient_evaluator(c: CoefficientSample) -> Evaluator:
    return partial(eval_coefficient, c)


def jump_lines(c: CoefficientSample) -> Tuple[np.ndarray, np.ndarray]:
    """Jump abscissae of path_x and ordinates of path_y inside (0, D)."""

    def inside(times: np.ndarray) -> np.ndarray:
        return np.sort(times[(times > 0.0) & (times < c.domain)])

    return inside(c.path_x.jump_times), inside(c.path_y.jump_times)


def rasterize(c: CoefficientSample, grid: TensorGrid) -> GridField:
    """Coefficient values at the grid nodes."""
    if grid.x0 < 0.0 or grid.y0 < 0.0 or grid.x1 > c.domain or grid.y1 > c.domain:
        raise CoefficientError("Raster grid must lie inside the domain")
    gx, gy = grid.meshgrid()
    return GridField(grid, eval_coefficient(c, gx, gy))


def gaussian_kernel(grid: TensorGrid, nu_s: float) -> np.ndarray:
    """Weights phi(x, y) dx dy on grid offsets within radius 4 nu_s.

    The kernel is not renormalized; its mass approximates 1 - exp(-8).
    """
    if not nu_s > 0.0:
        raise CoefficientError(f"Kernel width must be > 0 (got {nu_s})")
    if grid.dx > nu_s or grid.dy > nu_s:
        raise CoefficientError(
            f"Grid spacing {grid.spacing:.3g} exceeds the kernel width {nu_s:.3g}"
        )
    radius = KERNEL_RADIUS * nu_s
    kx = int(np.floor(radius / grid.dx + 1e-9))
    ky = int(np.floor(radius / grid.dy + 1e-9))
    ox = np.arange(-kx, kx + 1) * grid.dx
    oy = np.arange(-ky, ky + 1) * grid.dy
    r2 = ox[:, None] ** 2 + oy[None, :] ** 2
    density = np.exp(-r2 / (2.0 * nu_s**2)) / (2.0 * np.pi * nu_s**2)
    return np.where(r2 <= radius**2 * (1.0 + 1e-12), density * grid.dx * grid.dy, 0.0)


def smooth(raster: GridField, nu_s: float) -> SmoothedCoefficient:
    """Convolve the zero-extended raster with the truncated Gaussian kernel."""
    start_time = time.perf_counter()
    kernel = gaussian_kernel(raster.grid, nu_s)
    values = fftconvolve(raster.values, kernel, mode="same")
    logger.debug(
        f"Smoothed {raster.grid.nx}x{raster.grid.ny} raster (nu_s={nu_s}) in "
        f"{(time.perf_counter() - start_time) * 1000:.2f} ms"
    )
    return SmoothedCoefficient(
        base=raster,
        nu_s=nu_s,
        smoothed=GridField(raster.grid, values),
        kernel_mass=float(kernel.sum()),
    )


class GaussianSmoother:
    """Maps a coefficient sample to the evaluator of its smoothed raster."""

    def __init__(self, nu_s: float, grid: TensorGrid):
        gaussian_kernel(grid, nu_s)
        self.nu_s = nu_s
        self.grid = grid

    def __call__(self, c: CoefficientSample) -> Evaluator:
        return smooth(rasterize(c, self.grid), self.nu_s).evaluate


def identity_smoother(c: CoefficientSample) -> Evaluator:
    """Control variate equal to the rough coefficient."""
    return coefficient_evaluator(c)
