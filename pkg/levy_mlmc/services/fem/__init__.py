"""
Finite Element Service

P1 finite elements on uniform and sample-adapted triangulations.
"""

from levy_mlmc.services.fem.mesh_builder import (
    build_adapted_mesh,
    build_uniform_mesh,
    dump_mesh_json,
    mesh_to_dict,
    tensor_mesh,
)
from levy_mlmc.services.fem.norms import h1_distance, h1_inner, h1_norm, prolong
from levy_mlmc.services.fem.solver import assemble_solve, assemble_system

__all__ = [
    "build_adapted_mesh",
    "build_uniform_mesh",
    "dump_mesh_json",
    "mesh_to_dict",
    "tensor_mesh",
    "h1_distance",
    "h1_inner",
    "h1_norm",
    "prolong",
    "assemble_solve",
    "assemble_system",
]
