"""
levy-mlmc Command Line Entry Point

Main entry point for the levy-mlmc experiment runner.
"""

import sys
from typing import List, Optional

from levy_mlmc.cli.commands import main as run_cli
from levy_mlmc.core.env import LOG_LEVEL, validate_settings
from levy_mlmc.core.logging_setup import configure_logging, console


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging(LOG_LEVEL)
    problems = validate_settings()
    if problems:
        console.print(f"⚠️  Warning: invalid settings: {'; '.join(problems)}", style="yellow")
    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
