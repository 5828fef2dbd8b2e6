"""
Mesh Builder

Structured triangulations of the unit square: uniform meshes, and
sample-adapted meshes whose lines contain every jump line of the coefficient.
"""

import json
import logging
import math
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from levy_mlmc.core.env import MAX_CELLS_PER_AXIS, MIN_ANGLE_DEG
from levy_mlmc.core.errors import MeshError
from levy_mlmc.models import Mesh, SideFlag

logger = logging.getLogger(__name__)

# Jump lines closer than this are merged
MERGE_TOLERANCE = 1e-9


def _cells_for(length: float, cap: float) -> int:
    return max(1, math.ceil(length / cap - 1e-9))


def tensor_mesh(
    x_lines: np.ndarray,
    y_lines: np.ndarray,
    merged_lines: Sequence[float] = (),
    angle_floor: float = MIN_ANGLE_DEG,
) -> Mesh:
    """Split every cell of the line grid along its (i, j)-(i+1, j+1) diagonal."""
    x_lines = np.asarray(x_lines, dtype=float)
    y_lines = np.asarray(y_lines, dtype=float)
    if x_lines.size < 2 or y_lines.size < 2:
        raise MeshError("Tensor meshes need at least two lines per axis")
    dx, dy = np.diff(x_lines), np.diff(y_lines)
    if np.any(dx <= 0.0) or np.any(dy <= 0.0):
        raise MeshError("Mesh lines must be strictly increasing")

    nx, ny = x_lines.size, y_lines.size
    gx, gy = np.meshgrid(x_lines, y_lines)  # (ny, nx): index j * nx + i
    nodes = np.column_stack([gx.ravel(), gy.ravel()])

    i, j = np.meshgrid(np.arange(nx - 1), np.arange(ny - 1))
    n00 = (j * nx + i).ravel()
    n10, n01, n11 = n00 + 1, n00 + nx, n00 + nx + 1
    triangles = np.concatenate(
        [np.column_stack([n00, n10, n11]), np.column_stack([n00, n11, n01])]
    )

    ii, jj = np.meshgrid(np.arange(nx), np.arange(ny))
    flags = np.zeros(nx * ny, dtype=np.int64)
    flags[(ii == 0).ravel()] |= int(SideFlag.LEFT)
    flags[(ii == nx - 1).ravel()] |= int(SideFlag.RIGHT)
    flags[(jj == 0).ravel()] |= int(SideFlag.BOTTOM)
    flags[(jj == ny - 1).ravel()] |= int(SideFlag.TOP)

    legs_a, legs_b = np.meshgrid(dx, dy)
    ratio = np.minimum(legs_a, legs_b) / np.maximum(legs_a, legs_b)
    min_angle = float(np.degrees(np.arctan(ratio.min())))
    h = float(math.hypot(dx.max(), dy.max()))

    return Mesh(
        nodes=nodes,
        triangles=triangles,
        side_flags=flags,
        h=h,
        min_angle=min_angle,
        x_lines=x_lines,
        y_lines=y_lines,
        merged_lines=tuple(merged_lines),
        angle_floor_met=min_angle >= angle_floor - 1e-9,
    )


def build_uniform_mesh(h_target: float, domain: float = 1.0) -> Mesh:
    """Squares of side s <= h_target / sqrt(2), so every diameter is <= h_target."""
    if not 0.0 < h_target < domain:
        raise MeshError(f"h_target must lie in (0, {domain}) (got {h_target})")
    cells = _cells_for(domain, h_target / math.sqrt(2.0))
    lines = np.linspace(0.0, domain, cells + 1)
    return tensor_mesh(lines, lines)


def _merge_lines(jumps: Sequence[float], domain: float) -> Tuple[np.ndarray, List[float]]:
    """{0, D} plus sorted jumps, dropping lines within MERGE_TOLERANCE of a kept one."""
    jumps = np.sort(np.asarray(jumps, dtype=float))
    if jumps.size and (jumps[0] <= 0.0 or jumps[-1] >= domain):
        raise MeshError("Jump coordinates must lie strictly inside the domain")
    lines, merged = [0.0], []
    for value in jumps:
        if value - lines[-1] < MERGE_TOLERANCE:
            merged.append(float(value))
        else:
            lines.append(float(value))
    if domain - lines[-1] < MERGE_TOLERANCE and len(lines) > 1:
        merged.append(lines.pop())
    lines.append(domain)
    return np.asarray(lines), merged


def _subdivide(lines: np.ndarray, cap: float) -> np.ndarray:
    pieces = [lines[:1]]
    for lo, hi in zip(lines[:-1], lines[1:]):
        pieces.append(np.linspace(lo, hi, _cells_for(hi - lo, cap) + 1)[1:])
    out = np.concatenate(pieces)
    out[-1] = lines[-1]
    return out


def build_adapted_mesh(
    jump_xs: Sequence[float],
    jump_ys: Sequence[float],
    hbar: float,
    domain: float = 1.0,
    angle_floor: float = MIN_ANGLE_DEG,
    max_cells: int = MAX_CELLS_PER_AXIS,
) -> Mesh:
    """Mesh aligned with the jump partition, with diameters <= hbar.

    Intervals are split into cells no longer than min(hbar / sqrt(2),
    g / tan(angle_floor)) with g the shortest interval, which keeps every
    angle above the floor unless that needs more than `max_cells` per axis.
    """
    if not hbar > 0.0:
        raise MeshError(f"hbar must be > 0 (got {hbar})")
    x_base, merged_x = _merge_lines(jump_xs, domain)
    y_base, merged_y = _merge_lines(jump_ys, domain)
    merged = merged_x + merged_y
    if merged:
        logger.info(f"Merged {len(merged)} jump lines closer than {MERGE_TOLERANCE:g}")

    size_cap = hbar / math.sqrt(2.0)
    shortest = min(np.diff(x_base).min(), np.diff(y_base).min())
    cap = min(size_cap, shortest / math.tan(math.radians(angle_floor)))

    def total_cells(lines: np.ndarray, step: float) -> int:
        return sum(_cells_for(hi - lo, step) for lo, hi in zip(lines[:-1], lines[1:]))

    if max(total_cells(x_base, cap), total_cells(y_base, cap)) > max_cells:
        cap = size_cap
    mesh = tensor_mesh(_subdivide(x_base, cap), _subdivide(y_base, cap), merged, angle_floor)
    if not mesh.angle_floor_met:
        logger.warning(
            f"Adapted mesh keeps a {mesh.min_angle:.2f} deg angle below the "
            f"{angle_floor:g} deg floor (shortest interval {shortest:.3e})"
        )
    return mesh


def mesh_to_dict(mesh: Mesh) -> dict:
    return mesh.to_dict()


def dump_mesh_json(mesh: Mesh, path: Union[str, Path]) -> Path:
    """Write nodes, triangles and side tags as JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(mesh_to_dict(mesh)))
    return path
