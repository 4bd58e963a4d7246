"""Command line surface: argument parsing and subcommand handlers."""

from .commands import HANDLERS
from .parser import build_parser

__all__ = ["HANDLERS", "build_parser"]
