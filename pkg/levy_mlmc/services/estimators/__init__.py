"""
Estimator Service

Singlelevel, multilevel and control-variate multilevel Monte Carlo on the
reference grid, with level planning and convergence studies.
"""

from levy_mlmc.services.estimators.engine import (
    PilotVariances,
    combine_means,
    mlmc,
    mlmc_cv,
    pilot_variances,
    same_estimate,
    slmc,
)
from levy_mlmc.services.estimators.planning import (
    SampleAllocation,
    equilibrate,
    equilibrated_sample_numbers,
    optimal_samples,
)
from levy_mlmc.services.estimators.sampling import (
    LevelPair,
    coefficient_view,
    draw_sample,
    level_mesh,
    sample_level_pair,
    solve_on_level,
)
from levy_mlmc.services.estimators.seeding import SampleStreams, SeedSchedule, StreamTag
from levy_mlmc.services.estimators.study import fit_rate, rmse_of_runs, rmse_study

__all__ = [
    "PilotVariances",
    "combine_means",
    "mlmc",
    "mlmc_cv",
    "pilot_variances",
    "same_estimate",
    "slmc",
    "SampleAllocation",
    "equilibrate",
    "equilibrated_sample_numbers",
    "optimal_samples",
    "LevelPair",
    "coefficient_view",
    "draw_sample",
    "level_mesh",
    "sample_level_pair",
    "solve_on_level",
    "SampleStreams",
    "SeedSchedule",
    "StreamTag",
    "fit_rate",
    "rmse_of_runs",
    "rmse_study",
]
