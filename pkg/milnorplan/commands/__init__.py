"""
Command modules of the CLI. Each module exposes `register(subparsers)`,
which adds its subcommands and binds a handler returning the exit status.
"""
from . import lift, plan, section, verify

COMMAND_MODULES = (plan, lift, section, verify)

__all__ = ["COMMAND_MODULES"]
