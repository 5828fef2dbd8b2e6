"""
Experiment Configuration Models

Pydantic models for TOML experiment files. Presets provide complete
parameter sets; a file only needs the keys it overrides.
"""

import math
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from levy_mlmc.models.base import (
    BoundarySide,
    MeshMode,
    SimulationMode,
    SubordinatorFamily,
    TransformKind,
)
from levy_mlmc.models.coefficient import Transform, TransformSpec
from levy_mlmc.models.field import MaternParams, TensorGrid
from levy_mlmc.models.mesh import BoundarySpec
from levy_mlmc.models.path import SubordinatorSpec
from levy_mlmc.models.problem import ProblemSetup

Variant = Literal["adapted-mlmc", "uniform-mlmc", "uniform-mlmc-cv", "adapted-mlmc-cv"]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class TransformConfig(_Section):
    kind: TransformKind
    scale: float = Field(default=1.0, ge=0.0)
    table_x: List[float] = Field(default_factory=list)
    table_y: List[float] = Field(default_factory=list)

    def build(self) -> Transform:
        return Transform(self.kind, self.scale, tuple(self.table_x), tuple(self.table_y))


class MaternConfig(_Section):
    nu: float = Field(gt=0.5)
    r: float = Field(gt=0.0)
    sigma2: float = Field(gt=0.0)

    def build(self) -> MaternParams:
        return MaternParams(self.nu, self.r, self.sigma2)


class SubordinatorConfig(_Section):
    family: SubordinatorFamily
    rate: float = Field(gt=0.0)
    shape: Optional[float] = Field(default=None, gt=0.0)
    mode: SimulationMode = SimulationMode.GRID
    rescale: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def check_family(self) -> "SubordinatorConfig":
        if self.family == SubordinatorFamily.GAMMA:
            if self.shape is None:
                raise ValueError("gamma subordinators need a shape")
            if self.mode == SimulationMode.EXACT:
                raise ValueError("gamma subordinators only support grid mode")
        return self

    def build(self) -> SubordinatorSpec:
        return SubordinatorSpec(self.family, self.rate, self.shape, self.mode, self.rescale)


class BoundaryConfig(_Section):
    left: float = 0.1
    right: float = 0.3
    flux: float = 0.0
    source: float = 10.0

    def build(self) -> BoundarySpec:
        return BoundarySpec(
            dirichlet=((BoundarySide.LEFT, self.left), (BoundarySide.RIGHT, self.right)),
            neumann=((BoundarySide.BOTTOM, self.flux), (BoundarySide.TOP, self.flux)),
            source=self.source,
        )


class LevelsConfig(_Section):
    """Mesh hierarchy h_l = h1 * ratio^-(l-1), l = 0..max_level, and rates."""
    h1: float = Field(gt=0.0, lt=1.0)
    ratio: float = Field(default=1.7, gt=1.0)
    max_level: int = Field(ge=0)
    kappa: float = Field(default=1.0, gt=0.0)
    gamma: float = Field(default=1.0, gt=0.0)
    c: float = Field(default=1.5, ge=1.0)
    xi: float = Field(default=0.1, gt=0.0)
    c_w: float = Field(default=1.0, gt=0.0)
    c_l: float = Field(default=1.0, gt=0.0)
    c_m: float = Field(default=1.0, gt=0.0)

    def h(self, level: int) -> float:
        return self.h1 * self.ratio ** (-(level - 1))

    def hierarchy(self, max_level: Optional[int] = None) -> List[float]:
        top = self.max_level if max_level is None else max_level
        return [self.h(level) for level in range(top + 1)]


class EstimatorConfig(_Section):
    variants: List[Variant] = Field(min_length=1)
    nu_s: Optional[float] = Field(default=None, gt=0.0)
    cv_mean: Literal["auto"] = "auto"
    pilot_samples: Optional[int] = Field(default=None, ge=2)
    n_runs: int = Field(default=10, ge=2)
    reference_level: int = Field(ge=0)
    reference_samples: Optional[int] = Field(default=None, ge=1)
    reference_mesh: MeshMode = MeshMode.ADAPTED

    @model_validator(mode="after")
    def check_cv(self) -> "EstimatorConfig":
        if any(v.endswith("-cv") for v in self.variants) and self.nu_s is None:
            raise ValueError("control variate variants need nu_s")
        return self


class ExperimentConfig(BaseModel):
    """One experiment: problem parameters, level hierarchy and estimators."""
    model_config = ConfigDict(extra="forbid")

    preset: str = "custom"
    seed: int = Field(default=0, ge=0)
    scale: float = Field(default=1.0, gt=0.0)
    threads: Optional[int] = Field(default=None, ge=1)
    reference_points: Optional[int] = Field(default=None, ge=2)

    abar: float = Field(default=0.1, gt=0.0)
    cut_level: float = Field(gt=0.0)
    cap: float = Field(default=100.0, gt=0.0)
    phi1: TransformConfig
    phi2: TransformConfig
    w1: MaternConfig
    w2: MaternConfig
    subordinator: SubordinatorConfig
    boundary: BoundaryConfig = Field(default_factory=BoundaryConfig)
    levels: LevelsConfig
    estimator: EstimatorConfig

    @field_validator("preset")
    @classmethod
    def strip_preset(cls, value: str) -> str:
        return value.strip()

    @model_validator(mode="after")
    def check_reference_level(self) -> "ExperimentConfig":
        if self.estimator.reference_level <= self.levels.max_level:
            raise ValueError(
                f"estimator.reference_level ({self.estimator.reference_level}) must exceed "
                f"levels.max_level ({self.levels.max_level})"
            )
        return self

    def problem(self, reference_points: int) -> ProblemSetup:
        """Expand into the pathwise problem the estimators run on."""
        points = self.reference_points or reference_points
        return ProblemSetup(
            transforms=TransformSpec(self.phi1.build(), self.phi2.build(), self.abar),
            w1=self.w1.build(),
            w2=self.w2.build(),
            subordinator=self.subordinator.build(),
            cut_level=self.cut_level,
            cap=self.cap,
            boundary=self.boundary.build(),
            reference_grid=TensorGrid.square(1.0, points - 1),
        )

    def scaled(self, samples: int) -> int:
        """Apply the desk-scale factor to a sample count (floor 1)."""
        return max(1, math.ceil(self.scale * samples - 1e-9))

    def with_overrides(
        self,
        seed: Optional[int] = None,
        scale: Optional[float] = None,
        max_level: Optional[int] = None,
        reference_level: Optional[int] = None,
        threads: Optional[int] = None,
    ) -> "ExperimentConfig":
        """Copy with CLI overrides applied and re-validated."""
        data = self.model_dump()
        if seed is not None:
            data["seed"] = seed
        if scale is not None:
            data["scale"] = scale
        if threads is not None:
            data["threads"] = threads
        if max_level is not None:
            data["levels"]["max_level"] = max_level
        if reference_level is not None:
            data["estimator"]["reference_level"] = reference_level
        return ExperimentConfig.model_validate(data)
