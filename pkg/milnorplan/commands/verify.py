"""`verify` command: runs a verification suite and prints its report as JSON."""
import argparse

from ..config import settings
from ..exceptions import MilnorError
from ..services.harness import (
    verify_all,
    verify_section_cmd,
    verify_sphere,
    verify_task,
    verify_transport,
    verify_tube,
)
from .common import add_germ_argument, emit, resolve_germ, status

SUITES = ("sphere", "tube", "transport", "task", "section", "all")


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Run a verification suite; exit status 0 iff it passes.")
    parser.add_argument("suite", choices=SUITES)
    add_germ_argument(parser, required=False)
    parser.add_argument("--m", type=int, default=None, help="Sphere dimension for the sphere suite.")
    parser.add_argument("--trials", type=int, default=None, help="Number of trials.")
    parser.add_argument("--samples", type=int, default=None, help="Samples per path or section.")
    parser.add_argument("--seed", type=int, default=None, help="Global seed (default: SEED).")
    parser.set_defaults(handler=run_verify)


def run_verify(args: argparse.Namespace) -> int:
    seed = settings.SEED if args.seed is None else args.seed

    if args.suite == "sphere":
        if args.m is None:
            raise MilnorError("The sphere suite needs --m.", exit_code=2)
        report = verify_sphere(args.m, args.trials or 10000, seed, args.samples or 256)
        emit(report)
        return status(report.passed)

    if args.germ is None:
        raise MilnorError(f"The {args.suite} suite needs --germ.", exit_code=2)
    g = resolve_germ(args.germ)

    if args.suite == "tube":
        report = verify_tube(g, args.trials or 200, seed)
    elif args.suite == "transport":
        report = verify_transport(g, seed)
    elif args.suite == "section":
        report = verify_section_cmd(g, seed, args.samples or 360)
    elif args.suite == "task":
        report = verify_task(g, args.trials or 1000, seed, args.samples)
    else:
        report = verify_all(g, seed, args.trials or 1000)
    emit(report)
    return status(report.passed)
