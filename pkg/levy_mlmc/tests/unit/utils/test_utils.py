"""
Test utilities and data factories for levy_mlmc tests.
"""

from typing import Sequence
from unittest.mock import Mock

import numpy as np

from levy_mlmc.models import (
    BoundarySpec,
    CoefficientSample,
    GridField,
    LevelPlan,
    MaternParams,
    PathKind,
    ProblemSetup,
    RmseRow,
    RmseTable,
    SimulationMode,
    SubordinatorFamily,
    SubordinatorPath,
    SubordinatorSpec,
    TensorGrid,
    Transform,
    TransformKind,
    TransformSpec,
)
from levy_mlmc.services.coefficient_builder import build_coefficient
from levy_mlmc.services.estimators import equilibrate
from levy_mlmc.services.subordinator import sample_poisson_exact


def zero_normal_rng() -> Mock:
    """Generator stand-in whose normal variates are all zero."""
    rng = Mock(spec=np.random.Generator)
    rng.standard_normal.side_effect = lambda size=None, *args, **kwargs: np.zeros(size)
    return rng


class TestDataFactory:
    """Factory for small, fast model objects."""

    @staticmethod
    def grid(cells: int = 8, extent: float = 1.0) -> TensorGrid:
        return TensorGrid.square(extent, cells)

    @staticmethod
    def matern(r: float = 0.5, sigma2: float = 1.0, nu: float = 1.5) -> MaternParams:
        return MaternParams(nu, r, sigma2)

    @staticmethod
    def constant_field(grid: TensorGrid, value: float = 0.0) -> GridField:
        return GridField(grid, np.full(grid.shape, value))

    @staticmethod
    def deterministic_transforms(abar: float = 1.0) -> TransformSpec:
        return TransformSpec(Transform.zero(), Transform.zero(), abar)

    @staticmethod
    def reference_transforms() -> TransformSpec:
        """abar = 0.1, Phi_1 = exp / 100, Phi_2 = 5 |.|."""
        return TransformSpec(
            Transform(TransformKind.SCALED_EXP, 0.01),
            Transform(TransformKind.SCALED_ABS, 5.0),
            0.1,
        )

    @staticmethod
    def exact_path(jumps: Sequence[float], horizon: float = 1.0) -> SubordinatorPath:
        jumps = np.asarray(sorted(jumps), dtype=float)
        return SubordinatorPath(
            horizon=horizon,
            jump_times=jumps,
            values=np.arange(1, jumps.size + 1, dtype=float),
            kind=PathKind.EXACT_POISSON,
        )

    @classmethod
    def coefficient(
        cls,
        jumps_x: Sequence[float] = (),
        jumps_y: Sequence[float] = (),
        w1_value: float = 0.0,
        w2_value: float = 0.0,
        transforms: TransformSpec = None,
        cut_level: float = 2.0,
        cap: float = 100.0,
    ) -> CoefficientSample:
        return CoefficientSample(
            w1=cls.constant_field(cls.grid(4), w1_value),
            w2=cls.constant_field(cls.grid(4, cut_level), w2_value),
            path_x=cls.exact_path(jumps_x),
            path_y=cls.exact_path(jumps_y),
            cut_level=cut_level,
            cap=cap,
            transforms=transforms or cls.reference_transforms(),
        )

    @classmethod
    def random_coefficient(
        cls,
        rng: np.random.Generator,
        rate: float = 3.0,
        cut_level: float = 2.0,
        cap: float = 100.0,
    ) -> CoefficientSample:
        """Reference transforms over random grid fields and exact Poisson paths."""
        w1_grid, w2_grid = cls.grid(8), cls.grid(8, cut_level)
        return build_coefficient(
            w1=GridField(w1_grid, rng.normal(0.0, 1.5, w1_grid.shape)),
            w2=GridField(w2_grid, rng.normal(0.0, 0.3, w2_grid.shape)),
            path_x=sample_poisson_exact(rate, 1.0, rng),
            path_y=sample_poisson_exact(rate, 1.0, rng),
            transforms=cls.reference_transforms(),
            cut_level=cut_level,
            cap=cap,
        )

    @classmethod
    def problem(
        cls,
        deterministic: bool = True,
        reference_cells: int = 32,
        mode: SimulationMode = SimulationMode.GRID,
        boundary: BoundarySpec = None,
    ) -> ProblemSetup:
        return ProblemSetup(
            transforms=cls.deterministic_transforms() if deterministic else cls.reference_transforms(),
            w1=cls.matern(0.5, 1.5**2),
            w2=cls.matern(0.5, 0.1**2),
            subordinator=SubordinatorSpec(SubordinatorFamily.POISSON, 1.0, mode=mode),
            cut_level=2.0,
            boundary=boundary or BoundarySpec(),
            reference_grid=cls.grid(reference_cells),
        )

    @staticmethod
    def plan(samples: Sequence[int] = (3, 2, 2), h: Sequence[float] = (0.5, 0.3, 0.18)) -> LevelPlan:
        return equilibrate(list(h)[: len(samples)]).with_samples(list(samples))

    @staticmethod
    def rmse_table() -> RmseTable:
        """Three levels with RMSE proportional to h (slope 1)."""
        h = [0.3, 0.3 / 1.7, 0.3 / 1.7**2]
        rows = [RmseRow(level, hl, 2.0 * hl, 1.5 * level) for level, hl in enumerate(h, start=1)]
        return RmseTable(rows, 1.0)
