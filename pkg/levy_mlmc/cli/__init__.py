"""Command line surface."""

from levy_mlmc.cli.commands import build_parser, main

__all__ = ["build_parser", "main"]
