"""`plan-sphere` and `plan-task` commands."""
import argparse

import structlog

from ..config import settings
from ..services.taskplan import base_parity, plan_task, summarize
from ..services.trace import export_trace
from ..spheres.geometry import SpherePoint
from ..spheres.planner import parity_of, plan_sphere
from .common import add_germ_argument, add_output_arguments, emit_run, parse_point, resolve_germ, tube_start

logger = structlog.get_logger(__name__)


def register(subparsers) -> None:
    sphere = subparsers.add_parser("plan-sphere", help="Plan a path between two points of a unit sphere.")
    sphere.add_argument("--from", dest="start", required=True, help="Start point on S^m, comma-separated.")
    sphere.add_argument("--to", dest="target", required=True, help="Target point on S^m, comma-separated.")
    add_output_arguments(sphere)
    sphere.set_defaults(handler=run_plan_sphere)

    task = subparsers.add_parser("plan-task", help="Plan a tube path from a start point to the fiber over a target.")
    add_germ_argument(task)
    task.add_argument("--start", required=True, help="Start point a in R^n, comma-separated.")
    task.add_argument("--target", required=True, help="Target A on the delta-sphere in R^p, comma-separated.")
    task.add_argument("--steps", type=int, default=None, help="Lift steps (default: TASK_STEPS).")
    add_output_arguments(task)
    task.set_defaults(handler=run_plan_task)


def run_plan_sphere(args: argparse.Namespace) -> int:
    theta1, theta2 = SpherePoint(parse_point(args.start)), SpherePoint(parse_point(args.target))
    plan = plan_sphere(theta1, theta2)
    m = theta1.m
    trace = export_trace(
        plan.path,
        args.samples,
        file=args.out,
        fmt=args.format,
        kind="sphere-plan",
        planner=parity_of(m).value,
        region=plan.region,
    )
    emit_run(trace, {"m": m, "region": plan.region, "margin": plan.margin}, args)
    return 0


def run_plan_task(args: argparse.Namespace) -> int:
    g = resolve_germ(args.germ)
    a = tube_start(g, parse_point(args.start))
    target = parse_point(args.target)
    plan = plan_task(g, a, target, args.steps)
    summary = summarize(g, plan, a, target)
    logger.info("Task planned", germ=g.name, region=plan.region, residual=summary.endpoint_residual)
    trace = export_trace(
        plan.path,
        args.samples,
        file=args.out,
        fmt=args.format,
        germ=g,
        kind="task-plan",
        planner=base_parity(g).value,
        region=plan.region,
    )
    emit_run(trace, summary, args)
    return 0 if summary.endpoint_residual <= settings.RESIDUAL_LIMIT else 1
