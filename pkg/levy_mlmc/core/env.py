"""
Environment Variables Management

Loads process-level settings from the .env file in the project root.
Experiment parameters live in TOML configs (see models.experiment); this
module only holds knobs that tune how the numerics run on a given machine.
"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Project root is two levels up from this file
PROJECT_ROOT = Path(__file__).parent.parent.parent
ENV_FILE = PROJECT_ROOT / ".env"

load_dotenv(ENV_FILE)


def get_env(key: str, default: Optional[str] = None) -> Optional[str]:
    """Get environment variable with optional default value."""
    return os.getenv(key, default)


def get_bool_env(key: str, default: bool = False) -> bool:
    """Get boolean environment variable."""
    value = os.getenv(key)
    if value is None:
        return default
    return value.lower() in ("true", "1", "yes", "on")


def get_int_env(key: str, default: int = 0) -> int:
    """Get integer environment variable."""
    try:
        return int(os.getenv(key, str(default)))
    except ValueError:
        return default


def get_float_env(key: str, default: float = 0.0) -> float:
    """Get float environment variable."""
    try:
        return float(os.getenv(key, repr(default)))
    except ValueError:
        return default


# Application settings
APP_NAME = get_env("APP_NAME", "levy-mlmc")
APP_VERSION = get_env("APP_VERSION", "1.0.0")
LOG_LEVEL = get_env("LEVY_MLMC_LOG_LEVEL", "INFO")

# Execution
THREADS = get_int_env("LEVY_MLMC_THREADS", os.cpu_count() or 1)
OUTPUT_DIR = get_env("LEVY_MLMC_OUTPUT_DIR", "results")
RUN_SLOW_STUDIES = get_bool_env("LEVY_MLMC_RUN_SLOW", False)

# Numerics
REFERENCE_POINTS = get_int_env("LEVY_MLMC_REFERENCE_POINTS", 401)
SOLVER_RTOL = get_float_env("LEVY_MLMC_SOLVER_RTOL", 1e-10)
DIRECT_SOLVE_LIMIT = get_int_env("LEVY_MLMC_DIRECT_SOLVE_LIMIT", 20000)
EMBED_MAX_PADDING = get_int_env("LEVY_MLMC_EMBED_MAX_PADDING", 8)
EMBED_CLIP_BOUND = get_float_env("LEVY_MLMC_EMBED_CLIP_BOUND", 1e-3)
MIN_ANGLE_DEG = get_float_env("LEVY_MLMC_MIN_ANGLE_DEG", 10.0)
MAX_CELLS_PER_AXIS = get_int_env("LEVY_MLMC_MAX_CELLS_PER_AXIS", 256)


def validate_settings() -> list[str]:
    """Validate numeric settings. Returns a list of problems found."""
    problems = []

    if THREADS < 1:
        problems.append(f"LEVY_MLMC_THREADS must be >= 1 (got {THREADS})")
    if REFERENCE_POINTS < 2:
        problems.append(
            f"LEVY_MLMC_REFERENCE_POINTS must be >= 2 (got {REFERENCE_POINTS})"
        )
    if not 0.0 < SOLVER_RTOL < 1.0:
        problems.append(f"LEVY_MLMC_SOLVER_RTOL must lie in (0, 1) (got {SOLVER_RTOL})")
    if EMBED_MAX_PADDING < 1:
        problems.append(
            f"LEVY_MLMC_EMBED_MAX_PADDING must be >= 1 (got {EMBED_MAX_PADDING})"
        )
    if not 0.0 < MIN_ANGLE_DEG < 45.0:
        problems.append(
            f"LEVY_MLMC_MIN_ANGLE_DEG must lie in (0, 45) (got {MIN_ANGLE_DEG})"
        )

    return problems
