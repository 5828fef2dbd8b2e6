"""
Mesh Models

Data models for conforming triangulations of the unit square, P1 finite
element solutions on them, and mixed Dirichlet-Neumann boundary data.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np

from levy_mlmc.core.errors import MeshError
from levy_mlmc.models.base import BoundarySide, NodeTag, SideFlag

ScalarField = Union[float, Callable[[np.ndarray, np.ndarray], np.ndarray]]


def evaluate_scalar(value: ScalarField, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Evaluate a constant-or-callable datum at points."""
    if callable(value):
        return np.broadcast_to(np.asarray(value(x, y), dtype=float), np.shape(x))
    return np.full(np.shape(x), float(value))


@dataclass(frozen=True)
class BoundarySpec:
    """Dirichlet values, Neumann fluxes and the source term.

    Defaults are the mixed conditions u = 0.1 on x = 0, u = 0.3 on x = 1,
    zero flux on y = 0 and y = 1, and f = 10.
    """
    dirichlet: Tuple[Tuple[BoundarySide, float], ...] = (
        (BoundarySide.LEFT, 0.1),
        (BoundarySide.RIGHT, 0.3),
    )
    neumann: Tuple[Tuple[BoundarySide, ScalarField], ...] = (
        (BoundarySide.BOTTOM, 0.0),
        (BoundarySide.TOP, 0.0),
    )
    source: ScalarField = 10.0

    def __post_init__(self):
        if not self.dirichlet:
            raise MeshError("BoundarySpec needs a nonempty Dirichlet part")
        sides = [side for side, _ in self.dirichlet] + [side for side, _ in self.neumann]
        if len(set(sides)) != len(sides):
            raise MeshError("A boundary side is listed twice in BoundarySpec")

    @property
    def dirichlet_values(self) -> Dict[BoundarySide, float]:
        return dict(self.dirichlet)

    @property
    def neumann_fluxes(self) -> Dict[BoundarySide, ScalarField]:
        return dict(self.neumann)


@dataclass(frozen=True, eq=False)
class Mesh:
    """Conforming triangulation with counterclockwise triangles.

    Tensor meshes (every mesh the builders produce) keep their line
    coordinates; node (i, j) of the line grid has index j * len(x_lines) + i
    and every cell is split along its (i, j)-(i+1, j+1) diagonal.
    """
    nodes: np.ndarray                 # (n, 2)
    triangles: np.ndarray             # (m, 3)
    side_flags: np.ndarray            # (n,) SideFlag bitmask
    h: float                          # max triangle diameter
    min_angle: float                  # degrees
    x_lines: Optional[np.ndarray] = None
    y_lines: Optional[np.ndarray] = None
    merged_lines: Tuple[float, ...] = ()
    angle_floor_met: bool = True

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        triangles = np.asarray(self.triangles, dtype=np.int64)
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise MeshError("Mesh.nodes must have shape (n, 2)")
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise MeshError("Mesh.triangles must have shape (m, 3)")
        if triangles.size and (triangles.min() < 0 or triangles.max() >= len(nodes)):
            raise MeshError("Mesh.triangles reference unknown nodes")
        if len(self.side_flags) != len(nodes):
            raise MeshError("Mesh.side_flags must have one entry per node")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "triangles", triangles)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    @property
    def is_tensor(self) -> bool:
        return self.x_lines is not None and self.y_lines is not None

    def on_side(self, side: BoundarySide) -> np.ndarray:
        """Boolean mask of nodes lying on `side`."""
        return (np.asarray(self.side_flags) & int(SideFlag.of(side))) != 0

    def boundary_tags(self, bc: BoundarySpec) -> Tuple[np.ndarray, np.ndarray]:
        """Per-node NodeTag and prescribed Dirichlet value (nan elsewhere).

        Nodes on both a Dirichlet and a Neumann side are Dirichlet nodes; at
        a corner shared by two Dirichlet sides the first listed side wins.
        """
        tags = np.full(self.node_count, int(NodeTag.INTERIOR), dtype=np.int64)
        values = np.full(self.node_count, np.nan)
        for side, _ in bc.neumann:
            tags[self.on_side(side)] = int(NodeTag.NEUMANN)
        for side, value in reversed(bc.dirichlet):
            mask = self.on_side(side)
            tags[mask] = int(NodeTag.DIRICHLET)
            values[mask] = value
        return tags, values

    def to_dict(self) -> Dict[str, Any]:
        """JSON dump: nodes, triangles, side tags."""
        return {
            "nodes": self.nodes.tolist(),
            "triangles": self.triangles.tolist(),
            "side_flags": np.asarray(self.side_flags).tolist(),
            "h": self.h,
            "min_angle": self.min_angle,
            "merged_lines": list(self.merged_lines),
            "angle_floor_met": self.angle_floor_met,
        }


@dataclass(frozen=True, eq=False)
class FESolution:
    """Nodal P1 coefficient vector on a mesh."""
    mesh: Mesh
    values: np.ndarray
    relative_residual: float = 0.0
    iterations: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.mesh.node_count,):
            raise MeshError("FESolution.values must have one entry per mesh node")
        object.__setattr__(self, "values", values)
