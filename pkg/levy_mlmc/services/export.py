"""
Result Export

CSV and JSON artifacts of estimator runs and convergence studies. Column
headers are fixed so the files can be plotted directly.
"""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from levy_mlmc.core.errors import ConfigurationError
from levy_mlmc.models import EstimatorResult, RmseRow, RmseTable
from levy_mlmc.services.estimators import fit_rate
from levy_mlmc.services.grf import dump_field_csv

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

RMSE_COLUMNS = ["level", "h_L", "rmse", "fitted_rate", "wallclock_s"]
LEVEL_COLUMNS = ["level", "M", "VAR", "cost"]
LOGLOG_COLUMNS = ["level", "h_L", "rmse", "log_h", "log_rmse", "fitted_slope"]
TIME_TO_ERROR_COLUMNS = ["level", "cumulative_wallclock_s", "rmse"]


def _write_rows(path: PathLike, columns: List[str], rows: List[Dict[str, Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    logger.info(f"Wrote {len(rows)} rows to {path}")
    return path


def write_rmse_csv(table: RmseTable, path: PathLike) -> Path:
    rows = [
        {
            "level": row.level,
            "h_L": f"{row.h:.17g}",
            "rmse": f"{row.rmse:.17g}",
            "fitted_rate": f"{table.fitted_rate:.17g}",
            "wallclock_s": f"{row.wallclock_seconds:.6f}",
        }
        for row in table.rows
    ]
    return _write_rows(path, RMSE_COLUMNS, rows)


def read_rmse_csv(path: PathLike) -> RmseTable:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"No RMSE table at {path}")
    with path.open(newline="") as f:
        reader = csv.DictReader(f)
        missing = set(RMSE_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise ConfigurationError(f"{path} lacks columns {sorted(missing)}")
        records = list(reader)
    rows = [
        RmseRow(int(r["level"]), float(r["h_L"]), float(r["rmse"]), float(r["wallclock_s"]))
        for r in records
    ]
    rate = float(records[0]["fitted_rate"]) if records else float("nan")
    return RmseTable(rows, rate)


def write_levels_csv(result: EstimatorResult, path: PathLike) -> Path:
    rows = [
        {
            "level": s.level,
            "M": s.samples,
            "VAR": f"{s.variance:.17g}",
            "cost": f"{s.cost_seconds:.6f}",
        }
        for s in result.levels
    ]
    return _write_rows(path, LEVEL_COLUMNS, rows)


def write_mean_field_csv(result: EstimatorResult, path: PathLike) -> Path:
    return dump_field_csv(result.mean, path)


def write_json(data: Dict[str, Any], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, allow_nan=True))
    logger.info(f"Wrote {path}")
    return path


def plot_rows(table: RmseTable) -> Tuple[List[Dict[str, Any]], List[Dict[str, Any]], float]:
    """Log-log rows, time-to-error rows and the fitted slope of one table."""
    if len(table.rows) < 2:
        raise ConfigurationError(
            f"Plot data needs at least 2 result points (got {len(table.rows)})"
        )
    h = [row.h for row in table.rows]
    rmse = [row.rmse for row in table.rows]
    slope = fit_rate(h, rmse)
    loglog = [
        {
            "level": row.level,
            "h_L": f"{row.h:.17g}",
            "rmse": f"{row.rmse:.17g}",
            "log_h": f"{math.log(row.h):.17g}",
            "log_rmse": f"{math.log(row.rmse):.17g}",
            "fitted_slope": f"{slope:.17g}",
        }
        for row in table.rows
    ]
    cumulative = np.cumsum([row.wallclock_seconds for row in table.rows])
    time_to_error = [
        {
            "level": row.level,
            "cumulative_wallclock_s": f"{elapsed:.6f}",
            "rmse": f"{row.rmse:.17g}",
        }
        for row, elapsed in zip(table.rows, cumulative)
    ]
    return loglog, time_to_error, slope


def write_plot_data(table: RmseTable, out_dir: PathLike, stem: str = "") -> Tuple[Path, Path, float]:
    loglog, time_to_error, slope = plot_rows(table)
    out_dir = Path(out_dir)
    prefix = f"{stem}_" if stem else ""
    return (
        _write_rows(out_dir / f"{prefix}rmse_loglog.csv", LOGLOG_COLUMNS, loglog),
        _write_rows(out_dir / f"{prefix}time_to_error.csv", TIME_TO_ERROR_COLUMNS, time_to_error),
        slope,
    )
