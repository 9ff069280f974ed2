"""
Command-line entry point.

    python -m milnorplan [--config overrides.json] <command> ...

Errors derived from MilnorError are logged, printed as {"detail": message}
on stdout, and mapped to their exit code.
"""
import argparse
import json
import re
import sys
from pathlib import Path
from typing import List, Optional

import structlog

from .commands import COMMAND_MODULES
from .config import override_settings
from .exceptions import ConfigurationError, MilnorError

logger = structlog.get_logger(__name__)


class CommandParser(argparse.ArgumentParser):
    """
    Argument parser whose values may start with a minus sign followed by a
    digit, so points such as `-1,0` are read as values rather than flags.
    Subparsers inherit the class.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-\.?\d")


def build_parser() -> argparse.ArgumentParser:
    parser = CommandParser(
        prog="milnorplan",
        description="Motion and tasking planners on spheres and Milnor fibrations of polynomial germs.",
    )
    parser.add_argument(
        "--config",
        type=Path,
        default=None,
        help="JSON document overriding settings (delta, epsilon, tolerances, step counts).",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMAND_MODULES:
        module.register(subparsers)
    return parser


def load_config(path: Path) -> None:
    """
    Applies a --config document to the shared settings.

    Raises:
        ConfigurationError: If the file is unreadable, not a JSON object, or
            fails validation.
    """
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"Cannot read configuration {path}: {e}") from e
    if not isinstance(document, dict):
        raise ConfigurationError("Configuration root must be a JSON object.")
    override_settings(document)
    logger.info("Configuration applied", config=str(path), keys=sorted(document))


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            load_config(args.config)
        return args.handler(args)
    except MilnorError as exc:
        logger.error("Command failed", command=args.command, message=exc.message, exit_code=exc.exit_code)
        sys.stdout.write(json.dumps({"detail": exc.message}) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
