"""
Command Line Interface

`levy-mlmc run | dry-run | emit-plot` over presets and TOML experiment
configs.
"""

import argparse
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError
from rich.table import Table

from levy_mlmc.core.env import APP_NAME, APP_VERSION, OUTPUT_DIR
from levy_mlmc.core.errors import ConfigurationError, LevyMlmcError
from levy_mlmc.core.logging_setup import console
from levy_mlmc.models import ExperimentConfig
from levy_mlmc.services.experiment_runner import ExperimentRunner, ExperimentSummary, emit_plot_data
from levy_mlmc.services.presets import format_validation_error, load_experiment, preset_names

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Multilevel Monte Carlo for elliptic problems with Levy-type jump coefficients.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=preset_names(), help="Parameter set to start from")
    common.add_argument("--config", type=Path, help="TOML file merged over the preset")
    common.add_argument("--seed", type=int, help="Root seed of every random stream")
    common.add_argument("--scale", type=float, help="Fraction of the preset sample numbers")
    common.add_argument("--levels", type=int, help="Finest study level L")
    common.add_argument("--reference-level", type=int, help="Level of the SLMC reference")
    common.add_argument("--threads", type=int, help="Worker threads")
    common.add_argument("--out", type=Path, help="Output directory")

    run = commands.add_parser("run", parents=[common], help="Run the configured study")
    run.add_argument("--dry-run", action="store_true", help="Print the expanded plan and exit")
    commands.add_parser("dry-run", parents=[common], help="Print the expanded plan")
    commands.add_parser(
        "emit-plot", parents=[common], help="Write log-log and time-to-error CSVs from rmse.csv"
    )
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    config = load_experiment(args.preset, args.config)
    try:
        return config.with_overrides(
            seed=args.seed,
            scale=args.scale,
            max_level=args.levels,
            reference_level=args.reference_level,
            threads=args.threads,
        )
    except ValidationError as e:
        raise ConfigurationError(f"Invalid override: {format_validation_error(e)}") from e


def default_out(config: ExperimentConfig) -> Path:
    return Path(OUTPUT_DIR) / f"{config.preset}-seed{config.seed}"


def print_plan(report: Dict[str, Any]) -> None:
    console.print(
        f"[bold]{report['preset']}[/bold]  seed={report['seed']}  scale={report['scale']}  "
        f"threads={report['threads']}"
    )
    console.print(
        f"cut level K={report['cut_level']:g}, P(l(D) > K) = {report['cut_exceedance']:.4e}; "
        f"sample numbers: {report['sample_numbers']}"
    )
    ref = report["reference"]
    console.print(
        f"reference: SLMC level {ref['level']} h={ref['h']:.4g} M={ref['samples']} ({ref['mesh_mode']} mesh)"
    )
    for variant in report["variants"]:
        table = Table(title=variant["name"])
        for column in ("level", "h", "eps_W", "eps_l", "M"):
            table.add_column(column, justify="right")
        for params in variant["plan"]["levels"]:
            table.add_row(
                str(params["level"]),
                f"{params['h']:.4g}",
                f"{params['eps_w']:.4g}",
                f"{params['eps_l']:.4g}",
                str(params["samples"]),
            )
        console.print(table)


def print_summary(summary: ExperimentSummary, out_dir: Path) -> None:
    for outcome in summary.outcomes:
        table = Table(title=f"{outcome.variant} (fitted rate {outcome.table.fitted_rate:.3f})")
        for column in ("L", "h_L", "RMSE", "wallclock [s]"):
            table.add_column(column, justify="right")
        for row in outcome.table.rows:
            table.add_row(str(row.level), f"{row.h:.4g}", f"{row.rmse:.4e}", f"{row.wallclock_seconds:.2f}")
        console.print(table)
    console.print(f"Artifacts written to {out_dir} in {summary.wallclock_seconds:.1f} s", style="bold green")


def run_command(args: argparse.Namespace) -> int:
    if args.command == "emit-plot":
        out_dir = args.out
        if out_dir is None:
            out_dir = default_out(resolve_config(args))
        for item in emit_plot_data(out_dir):
            console.print(f"{item['source']}: slope {item['slope']:.4f} -> {item['loglog']}, {item['time_to_error']}")
        return EXIT_OK

    config = resolve_config(args)
    out_dir = args.out or default_out(config)
    runner = ExperimentRunner(config, out_dir)
    if args.command == "dry-run" or getattr(args, "dry_run", False):
        report = runner.dry_run()
        print_plan(report)
        logger.debug(json.dumps(report))
        return EXIT_OK

    summary = runner.run()
    print_summary(summary, out_dir)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run_command(args)
    except ConfigurationError as e:
        console.print(f"Configuration error: {e}", style="bold red")
        return EXIT_CONFIG
    except LevyMlmcError as e:
        logger.error(f"{args.command} failed: {e}")
        console.print(f"Error: {e}", style="bold red")
        return EXIT_FAILURE
