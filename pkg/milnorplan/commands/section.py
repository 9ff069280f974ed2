"""`cross-section` command: builds and verifies a section and exports it as a trace."""
import argparse
import math

import numpy as np

from ..config import settings
from ..fibration.section import build_section_s1, radial_section, verify_section
from ..fibration.tube import sample_fiber
from ..services.trace import export_trace
from ..spheres.paths import Segment
from .common import add_germ_argument, add_output_arguments, emit_run, resolve_germ

# radial traces follow a meridian and stop this far (in radians) before the antipode
MERIDIAN_MARGIN = 0.5


def register(subparsers) -> None:
    parser = subparsers.add_parser("cross-section", help="Construct a cross-section of the Milnor fibration.")
    add_germ_argument(parser)
    parser.add_argument("--seed", type=int, default=None, help="Seed for the base point and fiber joining.")
    add_output_arguments(parser, samples=360)
    parser.set_defaults(handler=run_cross_section)


def run_cross_section(args: argparse.Namespace) -> int:
    g = resolve_germ(args.germ)
    seed = settings.SEED if args.seed is None else args.seed

    if g.p == 2:
        section = build_section_s1(g, seed=seed)
        report = verify_section(g, section, args.samples)
        # t = theta / 2 pi
        path = Segment(
            lambda t: section.at_angle(2.0 * math.pi * t),
            section.at_angle(0.0),
            section.at_angle(2.0 * math.pi),
        )
        kind = "section"
    else:
        pole = np.zeros(g.p)
        pole[0] = g.delta
        x0 = sample_fiber(g, pole, 1, seed)[0]
        section = radial_section(g, pole, x0, seed=seed)
        report = verify_section(g, section, args.samples, seed=seed)
        reach = math.pi - MERIDIAN_MARGIN

        def meridian(t: float) -> np.ndarray:
            b = np.zeros(g.p)
            b[0], b[1] = math.cos(reach * t), math.sin(reach * t)
            return section(g.delta * b)

        path = Segment(meridian, x0.x, meridian(1.0))
        kind = "radial-section"

    trace = export_trace(path, args.samples, file=args.out, fmt=args.format, germ=g, kind=kind)
    emit_run(trace, report, args)
    return 0 if report.passed else 1
