"""`lift` command: horizontal lift of a base loop or arc from a start point."""
import argparse

import numpy as np

from ..exceptions import DimensionMismatchError, SphereDomainError
from ..fibration.transport import base_loop, horizontal_lift
from ..services.trace import export_trace
from ..spheres.paths import scaled
from ..spheres.planner import geodesic_section
from .common import add_germ_argument, add_output_arguments, emit_run, parse_point, resolve_germ, tube_start


def register(subparsers) -> None:
    parser = subparsers.add_parser("lift", help="Lift a base loop or arc horizontally into the Milnor tube.")
    add_germ_argument(parser)
    parser.add_argument("--start", required=True, help="Start point in R^n, comma-separated.")
    mode = parser.add_mutually_exclusive_group(required=True)
    mode.add_argument("--loop", action="store_true", help="Lift a full great circle through f(start).")
    mode.add_argument("--arc", default=None, help="Lift the shortest arc from f(start) to this point of the delta-sphere.")
    parser.add_argument("--steps", type=int, default=None, help="RK4 steps (default: TRANSPORT_STEPS).")
    add_output_arguments(parser)
    parser.set_defaults(handler=run_lift)


def run_lift(args: argparse.Namespace) -> int:
    g = resolve_germ(args.germ)
    x0 = tube_start(g, parse_point(args.start))
    if args.loop:
        base = base_loop(g, x0)
    else:
        target = parse_point(args.arc)
        if target.shape != (g.p,):
            raise DimensionMismatchError(g.p, target.size, what="arc target")
        if abs(np.linalg.norm(target) - g.delta) > 1e-9:
            raise SphereDomainError(f"Arc target has norm {np.linalg.norm(target):.17g}, expected delta={g.delta}.")
        fx = g.map.eval(x0)
        base = scaled(geodesic_section(fx / np.linalg.norm(fx), target / np.linalg.norm(target)), g.delta)

    path, report = horizontal_lift(g, base, x0, args.steps)
    report = report.model_copy(update={"displacement": float(np.linalg.norm(path.end - x0))})
    trace = export_trace(path, args.samples, file=args.out, fmt=args.format, germ=g, kind="lift")
    emit_run(trace, report, args)
    return 0
