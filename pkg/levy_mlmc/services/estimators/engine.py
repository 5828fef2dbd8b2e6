"""
Monte Carlo Estimators

Singlelevel Monte Carlo, multilevel Monte Carlo and multilevel Monte Carlo
with smoothed-coefficient control variates, all reporting on the reference
grid. Samples run on a thread pool and are reduced in sample-index order so
results do not depend on scheduling.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence

import numpy as np

from levy_mlmc.core.env import THREADS
from levy_mlmc.core.errors import EstimatorError, LevyMlmcError
from levy_mlmc.models import (
    EstimatorKind,
    EstimatorResult,
    GridField,
    LevelParams,
    LevelPlan,
    LevelStats,
    MeshMode,
    ProblemSetup,
    TensorGrid,
)
from levy_mlmc.services.coefficient_builder import GaussianSmoother, coefficient_evaluator
from levy_mlmc.services.estimators.sampling import (
    EvaluatorFactory,
    draw_sample,
    sample_level_pair,
    solve_on_level,
)
from levy_mlmc.services.estimators.seeding import SeedSchedule, StreamTag
from levy_mlmc.services.fem import h1_inner

logger = logging.getLogger(__name__)

# Samples submitted to the pool at once
BATCH_PER_THREAD = 4


class _Welford:
    """Running mean field and H1 sum of squares."""

    def __init__(self, grid: TensorGrid):
        self.grid = grid
        self.count = 0
        self.mean = np.zeros(grid.shape)
        self.m2 = 0.0

    def add(self, sample: np.ndarray):
        self.count += 1
        before = sample - self.mean
        self.mean = self.mean + before / self.count
        after = sample - self.mean
        self.m2 += h1_inner(GridField(self.grid, before), GridField(self.grid, after))

    @property
    def variance(self) -> float:
        return max(self.m2, 0.0) / (self.count - 1) if self.count > 1 else 0.0


@dataclass
class PilotVariances:
    """Per-level variances of plain and control-variate corrections from shared draws."""
    plain: List[float]
    cv: List[float]
    samples: int


def _ordered_map(fn: Callable[[int], object], count: int, threads: int) -> Iterator:
    if threads <= 1:
        for index in range(count):
            yield fn(index)
        return
    batch = threads * BATCH_PER_THREAD
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for start in range(0, count, batch):
            yield from pool.map(fn, range(start, min(count, start + batch)))


def _run_level(
    level: int,
    count: int,
    grid: TensorGrid,
    schedule: SeedSchedule,
    threads: int,
    worker: Callable,
    outputs: int = 1,
):
    """Accumulate `outputs` correction fields over `count` samples of one level."""
    accumulators = [_Welford(grid) for _ in range(outputs)]
    cost = 0.0

    def run(index: int):
        start = time.perf_counter()
        try:
            fields = worker(index)
        except LevyMlmcError as e:
            raise EstimatorError(
                f"Level {level} sample {index} failed: {e}", schedule.sample_id(level, index)
            ) from e
        return fields, time.perf_counter() - start

    for fields, seconds in _ordered_map(run, count, threads):
        cost += seconds
        for accumulator, values in zip(accumulators, fields):
            accumulator.add(values)
    return accumulators, cost


def _stats(level: int, accumulator: _Welford, cost: float, flags: List[str]) -> LevelStats:
    defined = accumulator.count > 1
    if not defined:
        logger.warning(f"Level {level}: variance undefined for a single sample, reported as 0")
        flags.append(f"level-{level}-variance-undefined")
    return LevelStats(level, accumulator.count, accumulator.variance, cost, defined)


def slmc(
    problem: ProblemSetup,
    samples: int,
    schedule: SeedSchedule,
    params: LevelParams,
    mesh_mode: MeshMode = MeshMode.UNIFORM,
    threads: int = THREADS,
    primary: EvaluatorFactory = coefficient_evaluator,
) -> EstimatorResult:
    """Mean of `samples` i.i.d. level solutions at `params`."""
    if samples < 1:
        raise EstimatorError("slmc needs at least one sample", schedule.schedule_id)
    start_time = time.perf_counter()
    logger.info(f"SLMC: {samples} samples at h={params.h:.4g} ({mesh_mode.value} mesh)")

    def worker(index: int):
        streams = schedule.sample_streams(params.level, index)
        draw = draw_sample(problem, params, streams, seed_id=schedule.sample_id(params.level, index))
        rough, _ = solve_on_level(problem, draw, params, mesh_mode, primary)
        return (rough.values,)

    (acc,), cost = _run_level(params.level, samples, problem.reference_grid, schedule, threads, worker)
    flags: List[str] = []
    stats = _stats(params.level, acc, cost, flags)
    logger.info(f"SLMC finished in {time.perf_counter() - start_time:.2f} s")
    return EstimatorResult(
        kind=EstimatorKind.SLMC,
        mean=GridField(problem.reference_grid, acc.mean),
        levels=[stats],
        seed_schedule=schedule.schedule_id,
        flags=flags,
    )


def _telescoping(
    plan: LevelPlan,
    problem: ProblemSetup,
    schedule: SeedSchedule,
    threads: int,
    kind: EstimatorKind,
    primary: EvaluatorFactory,
    smoother: Optional[EvaluatorFactory] = None,
    offset: Optional[GridField] = None,
) -> EstimatorResult:
    grid = problem.reference_grid
    total = np.zeros(grid.shape) if offset is None else offset.values.copy()
    levels, flags = [], []

    for params in plan.levels:
        level = params.level
        start_time = time.perf_counter()

        def worker(index: int, params=params, level=level):
            streams = schedule.sample_streams(level, index)
            draw = draw_sample(problem, params, streams, seed_id=schedule.sample_id(level, index))
            pair = sample_level_pair(draw, plan, level, problem, primary, smoother)
            if smoother is None:
                return (pair.fine.values - pair.coarse.values,)
            fine = pair.fine.values - pair.fine_smoothed.values
            coarse = pair.coarse.values - pair.coarse_smoothed.values
            return (fine - coarse,)

        (acc,), cost = _run_level(level, params.samples, grid, schedule, threads, worker)
        total += acc.mean
        levels.append(_stats(level, acc, cost, flags))
        logger.info(
            f"{kind.value} level {level}: {params.samples} samples, VAR={acc.variance:.4e}, "
            f"{time.perf_counter() - start_time:.2f} s"
        )

    return EstimatorResult(
        kind=kind,
        mean=GridField(grid, total),
        levels=levels,
        seed_schedule=schedule.schedule_id,
        plan=plan,
        flags=flags,
    )


def mlmc(
    plan: LevelPlan,
    problem: ProblemSetup,
    schedule: SeedSchedule,
    threads: int = THREADS,
    primary: EvaluatorFactory = coefficient_evaluator,
) -> EstimatorResult:
    """Telescoping sum of coupled level corrections E_M(u_l - u_{l-1})."""
    return _telescoping(plan, problem, schedule, threads, EstimatorKind.MLMC, primary)


def mlmc_cv(
    plan: LevelPlan,
    problem: ProblemSetup,
    nu_s: float,
    schedule: SeedSchedule,
    cv_mean: Optional[GridField] = None,
    threads: int = THREADS,
    smoother: Optional[EvaluatorFactory] = None,
) -> EstimatorResult:
    """MLMC of u - (u_smoothed - E(u_smoothed)).

    Without `cv_mean` the smoothed mean is estimated first by an MLMC run on
    the smoothed problem with the same plan and an independent stream.
    """
    smoother = smoother or GaussianSmoother(nu_s, problem.reference_grid)
    inner = None
    if cv_mean is None:
        logger.info("Estimating the control variate mean by MLMC on the smoothed problem")
        try:
            inner = mlmc(plan, problem, schedule.child(StreamTag.CV_MEAN), threads, primary=smoother)
        except EstimatorError as e:
            raise EstimatorError(f"Control variate mean estimation failed: {e}") from e
        cv_mean = inner.mean
    result = _telescoping(
        plan,
        problem,
        schedule,
        threads,
        EstimatorKind.MLMC_CV,
        coefficient_evaluator,
        smoother,
        offset=cv_mean,
    )
    result.cv_mean = inner
    return result


def pilot_variances(
    problem: ProblemSetup,
    plan: LevelPlan,
    n_pilot: int,
    schedule: SeedSchedule,
    nu_s: float,
    threads: int = THREADS,
    smoother: Optional[EvaluatorFactory] = None,
) -> PilotVariances:
    """VAR_l and VAR^CV_l from the same `n_pilot` draws per level."""
    if n_pilot < 2:
        raise EstimatorError("Pilot runs need at least two samples per level", schedule.schedule_id)
    smoother = smoother or GaussianSmoother(nu_s, problem.reference_grid)
    plain, cv = [], []
    for params in plan.levels:
        level = params.level

        def worker(index: int, params=params, level=level):
            streams = schedule.sample_streams(level, index)
            draw = draw_sample(problem, params, streams, seed_id=schedule.sample_id(level, index))
            pair = sample_level_pair(draw, plan, level, problem, coefficient_evaluator, smoother)
            rough = pair.fine.values - pair.coarse.values
            smoothed = pair.fine_smoothed.values - pair.coarse_smoothed.values
            return rough, rough - smoothed

        (acc_plain, acc_cv), _ = _run_level(
            level, n_pilot, problem.reference_grid, schedule, threads, worker, outputs=2
        )
        plain.append(acc_plain.variance)
        cv.append(acc_cv.variance)
        logger.info(
            f"Pilot level {level}: VAR={acc_plain.variance:.4e}, VAR_CV={acc_cv.variance:.4e}"
        )
    return PilotVariances(plain, cv, n_pilot)


def same_estimate(first: EstimatorResult, second: EstimatorResult) -> bool:
    """Bit equality of mean fields, variances and sample counts."""
    return (
        np.array_equal(first.mean.values, second.mean.values)
        and first.variances == second.variances
        and first.samples == second.samples
    )


def combine_means(results: Sequence[EstimatorResult]) -> GridField:
    grid = results[0].mean.grid
    return GridField(grid, np.mean([r.mean.values for r in results], axis=0))
