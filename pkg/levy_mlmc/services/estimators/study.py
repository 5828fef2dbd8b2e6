"""
Convergence Studies

RMSE of repeated estimator runs against a reference solution, per maximal
level, with the least-squares convergence rate in h.
"""

import logging
import math
import time
from typing import Callable, Sequence

import numpy as np

from levy_mlmc.core.errors import ConfigurationError
from levy_mlmc.models import EstimatorResult, GridField, RmseRow, RmseTable
from levy_mlmc.services.fem import h1_distance

logger = logging.getLogger(__name__)

RunFn = Callable[[int, int], EstimatorResult]


def fit_rate(h: Sequence[float], rmse: Sequence[float]) -> float:
    """Slope of log(rmse) against log(h) by least squares."""
    h = np.asarray(h, dtype=float)
    rmse = np.asarray(rmse, dtype=float)
    if h.size != rmse.size:
        raise ConfigurationError("h and rmse must have the same length")
    if h.size < 2:
        raise ConfigurationError(f"Fitting a rate needs at least 2 points (got {h.size})")
    if np.any(h <= 0.0) or np.any(rmse <= 0.0):
        raise ConfigurationError("h and rmse must be > 0 to fit a log-log rate")
    slope, _ = np.polyfit(np.log(h), np.log(rmse), 1)
    return float(slope)


def rmse_of_runs(reference: GridField, means: Sequence[GridField]) -> float:
    """sqrt of the mean squared H1 distance of the run means to the reference."""
    if not means:
        raise ConfigurationError("RMSE needs at least one run")
    return math.sqrt(float(np.mean([h1_distance(reference, m) ** 2 for m in means])))


def rmse_study(
    run_fn: RunFn,
    levels: Sequence[int],
    h: Sequence[float],
    n_runs: int,
    reference: GridField,
) -> RmseTable:
    """RMSE table over maximal levels.

    `run_fn(run_index, max_level)` returns one independent estimator run;
    `h[i]` is the finest mesh size of `levels[i]`.
    """
    if n_runs < 2:
        raise ConfigurationError(f"n_runs must be >= 2 (got {n_runs})")
    if len(levels) != len(h):
        raise ConfigurationError("one mesh size per level is required")

    rows = []
    for max_level, h_level in zip(levels, h):
        start_time = time.perf_counter()
        means, costs = [], []
        for run_index in range(n_runs):
            result = run_fn(run_index, max_level)
            if result.mean.grid != reference.grid:
                raise ConfigurationError("Estimator and reference grids differ")
            means.append(result.mean)
            costs.append(result.cost_seconds)
        rmse = rmse_of_runs(reference, means)
        rows.append(RmseRow(max_level, float(h_level), rmse, float(np.mean(costs))))
        logger.info(
            f"L={max_level}: RMSE={rmse:.4e} over {n_runs} runs "
            f"({time.perf_counter() - start_time:.2f} s)"
        )

    try:
        rate = fit_rate([r.h for r in rows], [r.rmse for r in rows])
    except ConfigurationError as e:
        logger.warning(f"No convergence rate fitted: {e}")
        rate = float("nan")
    return RmseTable(rows, rate)
