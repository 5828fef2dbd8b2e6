"""
P1 Finite Element Solver

Vectorized assembly of the P1 stiffness matrix and load vector on a
triangulation with mixed Dirichlet-Neumann data, symmetric elimination of
Dirichlet nodes, and a sparse direct or Jacobi-preconditioned CG solve.
"""

import logging
import time
from typing import Callable, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import cg, spsolve

from levy_mlmc.core.env import DIRECT_SOLVE_LIMIT, SOLVER_RTOL
from levy_mlmc.core.errors import SolverError
from levy_mlmc.models import BoundarySpec, FESolution, Mesh, NodeTag, SideFlag
from levy_mlmc.models.mesh import evaluate_scalar

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]

# Relative residual a direct solve must reach to be accepted
DIRECT_RESIDUAL_BOUND = 1e-8


def _geometry(mesh: Mesh) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-triangle basis gradient terms b, c, areas and centroids."""
    xy = mesh.nodes[mesh.triangles]  # (m, 3, 2)
    x, y = xy[..., 0], xy[..., 1]
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area = 0.5 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    if np.any(area <= 0.0):
        raise SolverError("Mesh has degenerate or clockwise triangles")
    return b, c, area, xy.mean(axis=1)


def _boundary_edges(mesh: Mesh) -> np.ndarray:
    """Edges that belong to exactly one triangle."""
    t = mesh.triangles
    edges = np.sort(np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
    unique, counts = np.unique(edges, axis=0, return_counts=True)
    return unique[counts == 1]


def assemble_system(mesh: Mesh, coeff: Evaluator, bc: BoundarySpec) -> Tuple[sp.csr_matrix, np.ndarray]:
    """Stiffness matrix and load vector before Dirichlet elimination.

    The coefficient and the source are evaluated once per triangle at its
    centroid; Neumann fluxes use the midpoint rule on each boundary edge.
    """
    b, c, area, centroid = _geometry(mesh)
    a = np.asarray(coeff(centroid[:, 0], centroid[:, 1]), dtype=float)
    if not np.all(np.isfinite(a)) or np.any(a <= 0.0):
        raise SolverError("Coefficient is not positive and finite at every centroid")

    local = a[:, None, None] * (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :])
    local /= 4.0 * area[:, None, None]
    t = mesh.triangles
    rows = np.broadcast_to(t[:, :, None], local.shape).ravel()
    cols = np.broadcast_to(t[:, None, :], local.shape).ravel()
    n = mesh.node_count
    stiffness = sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()

    f = evaluate_scalar(bc.source, centroid[:, 0], centroid[:, 1])
    load = np.bincount(t.ravel(), weights=np.repeat(f * area / 3.0, 3), minlength=n)

    if bc.neumann:
        edges = _boundary_edges(mesh)
        flags = np.asarray(mesh.side_flags)
        for side, flux in bc.neumann:
            bit = int(SideFlag.of(side))
            on_side = edges[((flags[edges[:, 0]] & bit) != 0) & ((flags[edges[:, 1]] & bit) != 0)]
            if on_side.size == 0:
                continue
            p0, p1 = mesh.nodes[on_side[:, 0]], mesh.nodes[on_side[:, 1]]
            mid = 0.5 * (p0 + p1)
            length = np.linalg.norm(p1 - p0, axis=1)
            g = evaluate_scalar(flux, mid[:, 0], mid[:, 1])
            half = np.repeat(g * length / 2.0, 2)
            load += np.bincount(on_side.ravel(), weights=half, minlength=n)

    return stiffness, load


def assemble_solve(
    mesh: Mesh,
    coeff: Evaluator,
    bc: BoundarySpec,
    rtol: float = SOLVER_RTOL,
    direct_limit: int = DIRECT_SOLVE_LIMIT,
) -> FESolution:
    """Solve the pathwise weak problem on `mesh` for coefficient `coeff`."""
    start_time = time.perf_counter()
    stiffness, load = assemble_system(mesh, coeff, bc)

    tags, prescribed = mesh.boundary_tags(bc)
    fixed = tags == int(NodeTag.DIRICHLET)
    free = ~fixed
    u = np.zeros(mesh.node_count)
    u[fixed] = prescribed[fixed]

    system = stiffness[free][:, free].tocsr()
    rhs = load[free] - stiffness[free][:, fixed] @ u[fixed]
    n_free = int(free.sum())
    iterations = 0
    method = "direct"

    if n_free:
        diagonal = system.diagonal()
        if np.any(diagonal <= 0.0):
            raise SolverError("Non-positive pivot in the reduced stiffness matrix")
        if n_free < direct_limit:
            u_free = spsolve(system.tocsc(), rhs)
        else:
            method = "cg"
            counter = {"n": 0}

            def count(_):
                counter["n"] += 1

            preconditioner = sp.diags(1.0 / diagonal)
            u_free, info = cg(
                system, rhs, rtol=rtol, atol=0.0, maxiter=10 * n_free, M=preconditioner, callback=count
            )
            iterations = counter["n"]
            if info != 0:
                raise SolverError(
                    f"CG did not converge to rtol={rtol:g} in {iterations} iterations", iterations
                )
        u[free] = u_free
        rhs_norm = np.linalg.norm(rhs)
        residual = np.linalg.norm(system @ u_free - rhs)
        relative = float(residual / rhs_norm) if rhs_norm > 0.0 else float(residual)
        if not np.isfinite(relative) or (method == "direct" and relative > DIRECT_RESIDUAL_BOUND):
            raise SolverError(f"Direct solve left relative residual {relative:.2e}")
    else:
        relative = 0.0

    elapsed_ms = (time.perf_counter() - start_time) * 1000
    logger.debug(f"Solved {n_free} unknowns ({method}) in {elapsed_ms:.2f} ms")
    return FESolution(
        mesh=mesh,
        values=u,
        relative_residual=relative,
        iterations=iterations,
        metadata={"method": method, "free_nodes": n_free},
    )
