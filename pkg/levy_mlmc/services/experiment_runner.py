"""
Experiment Runner Service

Runs a configured convergence study: reference solution, equilibrated or
pilot-optimized level plans, repeated estimator runs per variant, and the
CSV/JSON artifacts of each variant.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from levy_mlmc.core.env import REFERENCE_POINTS, THREADS
from levy_mlmc.core.errors import ConfigurationError
from levy_mlmc.models import (
    EstimatorResult,
    ExperimentConfig,
    LevelParams,
    LevelPlan,
    MeshMode,
    ProblemSetup,
    RmseTable,
)
from levy_mlmc.services import export
from levy_mlmc.services.estimators import (
    SeedSchedule,
    StreamTag,
    equilibrate,
    mlmc,
    mlmc_cv,
    optimal_samples,
    pilot_variances,
    rmse_study,
    slmc,
)
from levy_mlmc.services.subordinator import exceedance_probability

logger = logging.getLogger(__name__)


@dataclass
class VariantPlan:
    """Estimator variant with the plan of its finest study level."""
    name: str
    mesh_mode: MeshMode
    control_variate: bool
    plan: LevelPlan

    @classmethod
    def parse(cls, name: str, plan: LevelPlan) -> "VariantPlan":
        mode, _, kind = name.partition("-")
        return cls(name, MeshMode(mode), kind.endswith("-cv"), plan.with_mesh_mode(MeshMode(mode)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "mesh_mode": self.mesh_mode.value,
            "control_variate": self.control_variate,
            "plan": self.plan.to_dict(),
        }


@dataclass
class StudyOutcome:
    """Artifacts and tables of one variant."""
    variant: str
    table: RmseTable
    top_result: EstimatorResult
    directory: Path

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variant": self.variant,
            "rmse": self.table.to_dict(),
            "top_result": self.top_result.to_dict(),
            "directory": str(self.directory),
        }


@dataclass
class ExperimentSummary:
    config: ExperimentConfig
    reference: EstimatorResult
    outcomes: List[StudyOutcome] = field(default_factory=list)
    wallclock_seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "preset": self.config.preset,
            "seed": self.config.seed,
            "scale": self.config.scale,
            "config": self.config.model_dump(mode="json"),
            "reference": self.reference.to_dict(),
            "variants": [o.to_dict() for o in self.outcomes],
            "wallclock_seconds": self.wallclock_seconds,
        }


class ExperimentRunner:
    """Runs one ExperimentConfig end to end."""

    def __init__(self, config: ExperimentConfig, out_dir: Optional[Path] = None):
        self.config = config
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.threads = config.threads or THREADS
        self.problem: ProblemSetup = config.problem(REFERENCE_POINTS)
        self.root = SeedSchedule(config.seed)

    # Plans

    def equilibrated_plan(self, max_level: int, mesh_mode: MeshMode = MeshMode.UNIFORM) -> LevelPlan:
        """Equilibrated plan for levels 0..max_level with desk-scaled samples."""
        lv = self.config.levels
        plan = equilibrate(
            lv.hierarchy(max_level),
            kappa=lv.kappa,
            gamma=lv.gamma,
            c=lv.c,
            xi=lv.xi,
            c_w=lv.c_w,
            c_l=lv.c_l,
            c_m=lv.c_m,
            mesh_mode=mesh_mode,
        )
        return plan.with_samples([self.config.scaled(m) for m in plan.samples])

    def reference_params(self) -> LevelParams:
        lv = self.config.levels
        est = self.config.estimator
        params = self.equilibrated_plan(est.reference_level).level(est.reference_level)
        if est.reference_samples is not None:
            samples = est.reference_samples
        else:
            raw = lv.c_m * params.h ** (-2.0 * lv.kappa)
            samples = max(1, math.ceil(self.config.scale * raw - 1e-9))
        return LevelParams(params.level, params.h, params.eps_w, params.eps_l, samples)

    def variant_plans(self) -> List[VariantPlan]:
        plan = self.equilibrated_plan(self.config.levels.max_level)
        return [VariantPlan.parse(name, plan) for name in self.config.estimator.variants]

    def dry_run(self) -> Dict[str, Any]:
        """Expanded plans without any sampling."""
        spec = self.problem.subordinator
        tail = exceedance_probability(spec, self.problem.cut_level, self.problem.domain)
        est = self.config.estimator
        return {
            "preset": self.config.preset,
            "seed": self.config.seed,
            "scale": self.config.scale,
            "threads": self.threads,
            "cut_level": self.problem.cut_level,
            "cut_exceedance": tail,
            "sample_numbers": "pilot-optimized" if est.pilot_samples else "equilibrated",
            "reference": {
                "mesh_mode": est.reference_mesh.value,
                **self.reference_params().to_dict(),
            },
            "variants": [v.to_dict() for v in self.variant_plans()],
        }

    # Sample numbers

    def _pilot(self, plan: LevelPlan) -> Dict[bool, List[float]]:
        """Per-level variances for plain and control-variate corrections on the mesh mode of `plan`."""
        est = self.config.estimator
        n_pilot = est.pilot_samples
        schedule = self.root.child(StreamTag.PILOT)
        if est.nu_s is not None:
            pilot = pilot_variances(self.problem, plan, n_pilot, schedule, est.nu_s, self.threads)
            return {False: pilot.plain, True: pilot.cv}
        result = mlmc(plan.with_samples([n_pilot] * len(plan.levels)), self.problem, schedule, self.threads)
        return {False: result.variances}

    def _plans_per_level(self, variant: VariantPlan, pilot: Optional[Dict[bool, List[float]]]):
        plans = {}
        for max_level in self._study_levels():
            plan = variant.plan.truncated(max_level)
            if pilot is not None:
                h = [p.h for p in plan.levels]
                allocation = optimal_samples(pilot[variant.control_variate][: max_level + 1], h)
                if allocation.all_zero:
                    logger.warning(f"{variant.name} L={max_level}: pilot variances all zero")
                plan = plan.with_samples([self.config.scaled(m) for m in allocation.samples])
            plans[max_level] = plan
        return plans

    def _study_levels(self) -> List[int]:
        top = self.config.levels.max_level
        return list(range(min(1, top), top + 1))

    # Runs

    def reference(self) -> EstimatorResult:
        params = self.reference_params()
        mode = self.config.estimator.reference_mesh
        logger.info(
            f"Reference: SLMC at level {params.level} (h={params.h:.4g}, M={params.samples}, {mode.value})"
        )
        return slmc(
            self.problem,
            params.samples,
            self.root.child(StreamTag.REFERENCE),
            params,
            mesh_mode=mode,
            threads=self.threads,
        )

    def run_variant(self, variant: VariantPlan, reference: EstimatorResult, pilot=None) -> StudyOutcome:
        est = self.config.estimator
        plans = self._plans_per_level(variant, pilot)
        top_level = max(plans)
        kept: Dict[str, EstimatorResult] = {}

        def run_once(run_index: int, max_level: int) -> EstimatorResult:
            schedule = self.root.child(StreamTag.STUDY, max_level, run_index)
            plan = plans[max_level]
            if variant.control_variate:
                result = mlmc_cv(plan, self.problem, est.nu_s, schedule, threads=self.threads)
            else:
                result = mlmc(plan, self.problem, schedule, self.threads)
            if max_level == top_level and run_index == 0:
                kept["top"] = result
            return result

        logger.info(f"Variant {variant.name}: levels {list(plans)}, {est.n_runs} runs each")
        levels = list(plans)
        h = [plans[level].level(level).h for level in levels]
        table = rmse_study(run_once, levels, h, est.n_runs, reference.mean)
        directory = self._variant_dir(variant.name)
        outcome = StudyOutcome(variant.name, table, kept["top"], directory)
        if directory is not None:
            export.write_rmse_csv(table, directory / "rmse.csv")
            export.write_levels_csv(outcome.top_result, directory / "levels.csv")
            export.write_mean_field_csv(outcome.top_result, directory / "mean_field.csv")
            export.write_json(outcome.to_dict(), directory / "result.json")
        return outcome

    def _variant_dir(self, name: str) -> Optional[Path]:
        return None if self.out_dir is None else self.out_dir / name

    def run(self) -> ExperimentSummary:
        """Reference, then every variant; writes artifacts when out_dir is set."""
        start_time = time.perf_counter()
        variants = self.variant_plans()
        pilots: Dict[MeshMode, Dict[bool, List[float]]] = {}
        if self.config.estimator.pilot_samples:
            for mode in dict.fromkeys(v.mesh_mode for v in variants):
                pilots[mode] = self._pilot(self.equilibrated_plan(self.config.levels.max_level, mode))

        reference = self.reference()
        summary = ExperimentSummary(self.config, reference)
        if self.out_dir is not None:
            export.write_mean_field_csv(reference, self.out_dir / "reference_mean_field.csv")

        for variant in variants:
            summary.outcomes.append(self.run_variant(variant, reference, pilots.get(variant.mesh_mode)))

        summary.wallclock_seconds = time.perf_counter() - start_time
        if self.out_dir is not None:
            export.write_json(summary.to_dict(), self.out_dir / "result.json")
        logger.info(f"Experiment finished in {summary.wallclock_seconds:.1f} s")
        return summary


def emit_plot_data(result_dir: Path, out_dir: Optional[Path] = None) -> List[Dict[str, Any]]:
    """Plot-ready CSV pairs for every rmse.csv under `result_dir`."""
    result_dir = Path(result_dir)
    tables = sorted(result_dir.glob("rmse.csv")) or sorted(result_dir.glob("*/rmse.csv"))
    if not tables:
        raise ConfigurationError(f"No rmse.csv found under {result_dir}")
    emitted = []
    for path in tables:
        target = Path(out_dir) / path.parent.name if out_dir is not None else path.parent
        loglog, time_to_error, slope = export.write_plot_data(export.read_rmse_csv(path), target)
        emitted.append(
            {"source": str(path), "loglog": str(loglog), "time_to_error": str(time_to_error), "slope": slope}
        )
    return emitted
