"""Command line entry point.

Sets up logging and monitoring, dispatches to the subcommand handlers and
maps failures to exit codes: 0 on success, 1 for runtime errors and 2 for
usage errors.
"""

import shlex
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import structlog
from pydantic import ValidationError as PydanticValidationError

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from cli.commands import HANDLERS
from cli.parser import PROG, build_parser
from core.config import Settings, get_settings
from core.exceptions import BaseAppException, ConfigurationError, UsageError
from core.logging import clear_context, new_run_id, setup_logging
from core.monitoring import export_metrics, setup_monitoring, track_error

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def reproduction_command(argv: Sequence[str]) -> str:
    """The command line echoed into outputs; ``--threads`` does not change results and is left out."""
    kept: List[str] = []
    skip = False
    for token in argv:
        if skip:
            skip = False
            continue
        if token == "--threads":
            skip = True
            continue
        if token.startswith("--threads="):
            continue
        kept.append(token)
    return shlex.join([PROG, *kept])


def run_cli(argv: Optional[Sequence[str]] = None, settings: Optional[Settings] = None) -> int:
    """Run one subcommand.

    Args:
        argv: Arguments without the program name (default: ``sys.argv[1:]``).
        settings: Settings override.

    Returns:
        int: Process exit code.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        settings = settings or get_settings()
    except ConfigurationError as e:
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    setup_logging(settings)

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if settings.metrics_enabled:
        setup_monitoring(settings)
    run_id = new_run_id()
    logger.info("Command started", command=args.command, run_id=run_id)
    try:
        HANDLERS[args.command](args, settings, reproduction_command(argv))
    except UsageError as e:
        print(f"{PROG} {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (BaseAppException, PydanticValidationError, OSError) as e:
        track_error(type(e).__name__, "cli")
        logger.error("Command failed", command=args.command, error=str(e))
        print(f"{PROG} {args.command}: error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    finally:
        if settings.metrics_enabled and settings.metrics_file:
            export_metrics(settings.metrics_file)
        clear_context()
    logger.info("Command finished", command=args.command)
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
