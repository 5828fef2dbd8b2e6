"""
Experiment Presets

Parameter sets of the reference studies and the TOML loader that merges a
config file over them.
"""

import copy
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from levy_mlmc.core.errors import ConfigurationError
from levy_mlmc.models import ExperimentConfig

logger = logging.getLogger(__name__)

_COMMON: Dict[str, Any] = {
    "abar": 0.1,
    "cap": 100.0,
    "phi1": {"kind": "scaled-exp", "scale": 0.01},
    "phi2": {"kind": "scaled-abs", "scale": 5.0},
    "boundary": {"left": 0.1, "right": 0.3, "flux": 0.0, "source": 10.0},
    "levels": {"ratio": 1.7, "max_level": 5, "kappa": 1.0, "gamma": 1.0, "c": 1.5, "xi": 0.1},
}

_POISSON1: Dict[str, Any] = {
    "cut_level": 8.0,
    "w1": {"nu": 1.5, "r": 0.5, "sigma2": 1.5**2},
    "w2": {"nu": 1.5, "r": 0.5, "sigma2": 0.1**2},
    "subordinator": {"family": "poisson", "rate": 1.0, "mode": "grid"},
    "levels": {"h1": 0.3},
    "estimator": {
        "variants": ["adapted-mlmc", "uniform-mlmc"],
        "n_runs": 10,
        "reference_level": 7,
        "reference_mesh": "adapted",
    },
}

_POISSON5_SMOOTH: Dict[str, Any] = {
    "cut_level": 1.0,
    "w1": {"nu": 1.5, "r": 0.5, "sigma2": 0.5**2},
    "w2": {"nu": 1.5, "r": 0.5, "sigma2": 0.3**2},
    "subordinator": {"family": "poisson", "rate": 5.0, "mode": "exact", "rescale": 1.0 / 15.0},
    "levels": {"h1": 0.2},
    "estimator": {
        "variants": ["adapted-mlmc", "uniform-mlmc"],
        "n_runs": 10,
        "reference_level": 7,
        "reference_mesh": "adapted",
    },
}

_GAMMA_CV_1: Dict[str, Any] = {
    "cut_level": 2.0,
    "w1": {"nu": 1.5, "r": 0.5, "sigma2": 1.5**2},
    "w2": {"nu": 1.5, "r": 0.05, "sigma2": 0.3**2},
    "subordinator": {"family": "gamma", "rate": 10.0, "shape": 4.0, "mode": "grid"},
    "levels": {"h1": 0.3},
    "estimator": {
        "variants": ["uniform-mlmc", "uniform-mlmc-cv"],
        "nu_s": 0.01,
        "pilot_samples": 20,
        "n_runs": 10,
        "reference_level": 7,
        "reference_mesh": "uniform",
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; override wins, lists are replaced."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


PRESETS: Dict[str, Dict[str, Any]] = {
    "poisson1": _merge(_COMMON, _POISSON1),
    "poisson5-smooth": _merge(_COMMON, _POISSON5_SMOOTH),
    "poisson5-rough": _merge(_merge(_COMMON, _POISSON5_SMOOTH), {"w2": {"r": 0.1}}),
    "gamma-cv-1": _merge(_COMMON, _GAMMA_CV_1),
    "gamma-cv-2": _merge(
        _merge(_COMMON, _GAMMA_CV_1),
        {
            "phi1": {"scale": 0.2},
            "phi2": {"scale": 3.0},
            "w2": {"r": 0.2, "sigma2": 0.5**2},
        },
    ),
    "custom": {},
}


def preset_names() -> list[str]:
    return list(PRESETS)


def preset_data(name: str) -> Dict[str, Any]:
    """A fresh copy of a preset's raw parameters."""
    if name not in PRESETS:
        raise ConfigurationError(
            f"Unknown preset '{name}' (choose from {', '.join(preset_names())})"
        )
    data = copy.deepcopy(PRESETS[name])
    data["preset"] = name
    return data


def format_validation_error(error: ValidationError) -> str:
    """One line per problem, each prefixed by its dotted field path."""
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"{path}: {item['msg']}")
    return "; ".join(lines)


def build_config(data: Dict[str, Any]) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid experiment config: {format_validation_error(e)}") from e


def load_experiment(
    preset: Optional[str] = None, config_path: Optional[Path] = None
) -> ExperimentConfig:
    """Resolve a preset and an optional TOML file into a validated config.

    The file's own `preset` key applies when no preset is passed; the
    explicit argument wins otherwise.
    """
    overrides: Dict[str, Any] = {}
    if config_path is not None:
        path = Path(config_path)
        try:
            with path.open("rb") as f:
                overrides = tomllib.load(f)
        except FileNotFoundError as e:
            raise ConfigurationError(f"Config file not found: {path}") from e
        except tomllib.TOMLDecodeError as e:
            raise ConfigurationError(f"Config file {path} is not valid TOML: {e}") from e
        logger.info(f"Loaded experiment config from {path}")

    name = preset or overrides.get("preset") or "custom"
    overrides.pop("preset", None)
    if not overrides and name == "custom":
        raise ConfigurationError("The custom preset needs a --config file")
    return build_config(_merge(preset_data(name), overrides))
