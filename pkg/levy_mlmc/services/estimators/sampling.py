"""
Level Sampling

Draws one sample's randomness at a level's resolution and derives every
coarser level view from it, so fine and coarse solutions share common
random numbers.
"""

import logging
from typing import Callable, NamedTuple, Optional

from levy_mlmc.core.errors import ConfigurationError
from levy_mlmc.models import (
    CoefficientSample,
    GridField,
    LevelParams,
    LevelPlan,
    Mesh,
    MeshMode,
    ProblemSetup,
    SampleDraw,
    TensorGrid,
)
from levy_mlmc.services.coefficient_builder import (
    Evaluator,
    build_coefficient,
    coefficient_evaluator,
    jump_lines,
)
from levy_mlmc.services.estimators.seeding import SampleStreams
from levy_mlmc.services.fem import assemble_solve, build_adapted_mesh, build_uniform_mesh, prolong
from levy_mlmc.services.grf import get_field_sampler, restrict_field
from levy_mlmc.services.grf.base_adapter import FieldSampler
from levy_mlmc.services.subordinator import coarsen_path, get_path_sampler

logger = logging.getLogger(__name__)

EvaluatorFactory = Callable[[CoefficientSample], Evaluator]


class LevelPair(NamedTuple):
    """Prolonged level-l and level-(l-1) solutions of one draw.

    The smoothed entries are the control variate solutions on the same
    meshes and are None when no smoother is given.
    """
    fine: GridField
    coarse: GridField
    fine_smoothed: Optional[GridField] = None
    coarse_smoothed: Optional[GridField] = None


def field_grids(problem: ProblemSetup, params: LevelParams):
    """W_1 grid on [0, D]^2 and W_2 grid on [0, K]^2 at the level's eps_W."""
    w1_grid = TensorGrid.square(problem.domain, params.field_cells(problem.domain))
    w2_grid = TensorGrid.square(problem.cut_level, params.field_cells(problem.cut_level))
    return w1_grid, w2_grid


def draw_sample(
    problem: ProblemSetup,
    params: LevelParams,
    streams: SampleStreams,
    field_sampler: Optional[FieldSampler] = None,
    seed_id: str = "",
) -> SampleDraw:
    """All randomness of one sample at the resolution of `params`."""
    sampler = field_sampler or get_field_sampler()
    w1_grid, w2_grid = field_grids(problem, params)
    path_sampler = get_path_sampler(problem.subordinator)
    cells = params.path_cells(problem.domain)
    return SampleDraw(
        level=params.level,
        w1=sampler.sample(w1_grid, problem.w1, streams.w1),
        w2=sampler.sample(w2_grid, problem.w2, streams.w2),
        path_x=path_sampler.sample(problem.domain, cells, streams.path_x),
        path_y=path_sampler.sample(problem.domain, cells, streams.path_y),
        seed_id=seed_id,
    )


def coefficient_view(problem: ProblemSetup, draw: SampleDraw, params: LevelParams) -> CoefficientSample:
    """Coefficient of the draw at the (equal or coarser) resolution of `params`."""
    w1_grid, w2_grid = field_grids(problem, params)
    path_x, path_y = draw.path_x, draw.path_y
    if problem.subordinator.needs_grid:
        cells = params.path_cells(problem.domain)
        path_x = coarsen_path(path_x, cells=cells)
        path_y = coarsen_path(path_y, cells=cells)
    return build_coefficient(
        w1=restrict_field(draw.w1, w1_grid),
        w2=restrict_field(draw.w2, w2_grid),
        path_x=path_x,
        path_y=path_y,
        transforms=problem.transforms,
        cut_level=problem.cut_level,
        cap=problem.cap,
        rescale=problem.subordinator.rescale,
    )


def level_mesh(coefficient: CoefficientSample, h: float, mode: MeshMode) -> Mesh:
    if mode == MeshMode.ADAPTED:
        xs, ys = jump_lines(coefficient)
        return build_adapted_mesh(xs, ys, h, domain=coefficient.domain)
    if mode == MeshMode.UNIFORM:
        return build_uniform_mesh(h, domain=coefficient.domain)
    raise ConfigurationError(f"Unknown mesh mode {mode}")


def solve_on_level(
    problem: ProblemSetup,
    draw: SampleDraw,
    params: LevelParams,
    mesh_mode: MeshMode,
    primary: EvaluatorFactory = coefficient_evaluator,
    smoother: Optional[EvaluatorFactory] = None,
):
    """Prolonged solution at one level, plus the smoothed one on the same mesh."""
    coefficient = coefficient_view(problem, draw, params)
    mesh = level_mesh(coefficient, params.h, mesh_mode)
    grid = problem.reference_grid
    rough = prolong(assemble_solve(mesh, primary(coefficient), problem.boundary), grid)
    smoothed = None
    if smoother is not None:
        smoothed = prolong(assemble_solve(mesh, smoother(coefficient), problem.boundary), grid)
    return rough, smoothed


def sample_level_pair(
    draw: SampleDraw,
    plan: LevelPlan,
    level: int,
    problem: ProblemSetup,
    primary: EvaluatorFactory = coefficient_evaluator,
    smoother: Optional[EvaluatorFactory] = None,
) -> LevelPair:
    """Coupled (u_l, u_{l-1}) from one draw; u_{-1} is the zero field."""
    if draw.level != level:
        raise ConfigurationError(f"Draw at level {draw.level} cannot serve level {level}")
    fine, fine_smoothed = solve_on_level(
        problem, draw, plan.level(level), plan.mesh_mode, primary, smoother
    )
    if level == 0:
        zero = GridField.zeros(problem.reference_grid)
        return LevelPair(fine, zero, fine_smoothed, zero if smoother is not None else None)
    coarse, coarse_smoothed = solve_on_level(
        problem, draw, plan.level(level - 1), plan.mesh_mode, primary, smoother
    )
    return LevelPair(fine, coarse, fine_smoothed, coarse_smoothed)
