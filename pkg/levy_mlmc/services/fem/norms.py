"""
Reference Grid Norms and Prolongation

P1 evaluation of finite element solutions on the reference grid and the
discrete H1 inner product used for every error and variance.
"""

import numpy as np
from matplotlib.tri import LinearTriInterpolator, Triangulation
from scipy.integrate import trapezoid

from levy_mlmc.core.errors import FieldError, MeshError
from levy_mlmc.models import FESolution, GridField, TensorGrid

# Absolute slack for reference nodes on the domain boundary
LOCATE_TOLERANCE = 1e-12


def _locate(lines: np.ndarray, coords: np.ndarray):
    """Cell index and local coordinate in [0, 1] along one axis."""
    lo, hi = lines[0], lines[-1]
    if coords.min() < lo - LOCATE_TOLERANCE or coords.max() > hi + LOCATE_TOLERANCE:
        raise MeshError(f"Reference node outside the mesh [{lo}, {hi}]")
    coords = np.clip(coords, lo, hi)
    cell = np.clip(np.searchsorted(lines, coords, side="right") - 1, 0, lines.size - 2)
    local = (coords - lines[cell]) / (lines[cell + 1] - lines[cell])
    return cell, local


def _prolong_tensor(sol: FESolution, grid: TensorGrid) -> np.ndarray:
    mesh = sol.mesh
    nx = mesh.x_lines.size
    ci, s = _locate(mesh.x_lines, grid.xs)
    cj, t = _locate(mesh.y_lines, grid.ys)
    ci, cj = ci[:, None], cj[None, :]
    s, t = np.broadcast_arrays(s[:, None], t[None, :])
    n00 = cj * nx + ci
    u = sol.values
    u00, u10, u01, u11 = u[n00], u[n00 + 1], u[n00 + nx], u[n00 + nx + 1]
    lower = u00 + s * (u10 - u00) + t * (u11 - u10)
    upper = u00 + t * (u01 - u00) + s * (u11 - u01)
    return np.where(s >= t, lower, upper)


def _prolong_generic(sol: FESolution, grid: TensorGrid) -> np.ndarray:
    mesh = sol.mesh
    triangulation = Triangulation(mesh.nodes[:, 0], mesh.nodes[:, 1], mesh.triangles)
    gx, gy = grid.meshgrid()
    values = LinearTriInterpolator(triangulation, sol.values)(gx, gy)
    if np.ma.is_masked(values):
        raise MeshError("Reference node outside all mesh triangles")
    return np.asarray(values, dtype=float)


def prolong(sol: FESolution, grid: TensorGrid) -> GridField:
    """P1 interpolant of the solution at every reference grid node."""
    if sol.mesh.is_tensor:
        return GridField(grid, _prolong_tensor(sol, grid))
    return GridField(grid, _prolong_generic(sol, grid))


def _check_pair(f: GridField, g: GridField) -> TensorGrid:
    if f.grid != g.grid:
        raise FieldError("H1 quantities need fields on the same grid")
    if f.grid.nx < 2 or f.grid.ny < 2:
        raise FieldError("H1 quantities need at least 2 points per axis")
    return f.grid


def h1_inner(f: GridField, g: GridField) -> float:
    """Trapezoid-weighted (f, g) + (grad f, grad g) with finite difference gradients."""
    grid = _check_pair(f, g)
    fx, fy = np.gradient(f.values, grid.dx, grid.dy, edge_order=1)
    gx, gy = np.gradient(g.values, grid.dx, grid.dy, edge_order=1)
    integrand = f.values * g.values + fx * gx + fy * gy
    return float(trapezoid(trapezoid(integrand, dx=grid.dy, axis=1), dx=grid.dx))


def h1_norm(f: GridField) -> float:
    return float(np.sqrt(max(h1_inner(f, f), 0.0)))


def h1_distance(f: GridField, g: GridField) -> float:
    grid = _check_pair(f, g)
    return h1_norm(GridField(grid, f.values - g.values))
