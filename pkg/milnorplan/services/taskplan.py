"""
Tasking planner for the Milnor fibration f|: M(delta, epsilon) -> S^{p-1}_delta.

Given a tube point a and a target A on the delta-sphere, the planner picks the
sphere-planner region of (f(a)/||f(a)||, A/delta), plans on the unit sphere,
scales by delta and lifts the path horizontally from a. The resulting path
alpha starts at a and ends over A.
"""
from dataclasses import dataclass
from typing import Any, Callable, Optional, Tuple

import numpy as np
import structlog

from ..config import settings
from ..exceptions import DimensionMismatchError, SectionError, SphereDomainError
from ..germs.models import GermKind, GermSpec
from ..models import TaskPlanSummary, TransportReport
from ..spheres.paths import Constant, Mapped, Path, concat, constant, scaled
from ..spheres.planner import Parity, PlanResult, parity_of, plan_sphere, region_member
from ..fibration.transport import horizontal_lift
from ..fibration.tube import TubePoint, in_tube

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class TaskPlan:
    """A planned path alpha in the tube with alpha(0) = a and f(alpha(1)) = A."""
    region: int
    path: Path
    base_path: Path
    report: TransportReport


def base_sphere_dim(g: GermSpec) -> int:
    """Dimension of the unit base sphere S^{p-1}; every parity decision goes through here."""
    return g.p - 1


def base_parity(g: GermSpec) -> Parity:
    return parity_of(base_sphere_dim(g))


def _unit(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise SphereDomainError("Cannot place the zero vector on the base sphere.")
    return v / norm


def _start_point(g: GermSpec, a) -> np.ndarray:
    x = np.asarray(a.x if isinstance(a, TubePoint) else a, dtype=float)
    if x.shape != (g.n,):
        raise DimensionMismatchError(g.n, x.size)
    return x


def _target(g: GermSpec, target) -> np.ndarray:
    target = np.asarray(target, dtype=float)
    if target.shape != (g.p,):
        raise DimensionMismatchError(g.p, target.size, what="target")
    if abs(np.linalg.norm(target) - g.delta) > 1e-9:
        raise SphereDomainError(f"Target has norm {np.linalg.norm(target):.17g}, expected delta={g.delta}.")
    return target


def task_region(g: GermSpec, a, target, i: int) -> Tuple[bool, float]:
    """Membership of (a, A) in the pulled-back region i, with its margin."""
    x = _start_point(g, a)
    theta1 = _unit(g.map.eval(x))
    theta2 = _unit(_target(g, target))
    return region_member(base_sphere_dim(g), base_parity(g), i, theta1, theta2)


def pullback_section(f: Callable[[Any], Any], alpha: Callable[[Any], Any]) -> Callable[[Any], Tuple[Any, Any]]:
    """beta(b') = (b', alpha(f(b'))): a local section pulled back along f."""
    def beta(b_prime):
        return b_prime, alpha(f(b_prime))

    return beta


def plan_task(g: GermSpec, a, target, steps: Optional[int] = None) -> TaskPlan:
    """
    Plans a path in the tube from a to the fiber over `target`.

    Args:
        g: The germ.
        a: Start point in the tube.
        target: A point of S^{p-1}_delta.
        steps: Lift steps (default TASK_STEPS).

    Raises:
        SphereDomainError: If a is off the tube or the target off the sphere.
        TransportError: If the lift fails; carries the t-interval.
    """
    steps = settings.TASK_STEPS if steps is None else steps
    x = _start_point(g, a)
    target = _target(g, target)
    residuals = in_tube(g, x)
    if not residuals.inside:
        raise SphereDomainError(f"Start point is not in the tube (level residual {residuals.level_residual:.3e}).")

    def images(pair):
        start, goal = pair
        return _unit(g.map.eval(start)), _unit(goal)

    beta = pullback_section(images, lambda thetas: plan_sphere(*thetas))
    plan = beta((x, target))[1]
    base = plan.path
    # scaling to the delta-sphere happens only at the lift boundary
    on_delta = Constant(g.delta * base.start) if isinstance(base, Constant) else scaled(base, g.delta)
    lifted, report = horizontal_lift(g, on_delta, x, steps)

    logger.debug("Task planned", germ=g.name, region=plan.region, residual=report.max_level_residual)
    return TaskPlan(region=plan.region, path=lifted, base_path=base, report=report)


def summarize(g: GermSpec, plan: TaskPlan, a, target) -> TaskPlanSummary:
    x = _start_point(g, a)
    target = np.asarray(target, dtype=float)
    return TaskPlanSummary(
        germ=g.name,
        region=plan.region,
        tc_value=tc_value(g),
        start=x.tolist(),
        target=target.tolist(),
        endpoint_residual=float(np.linalg.norm(g.map.eval(plan.path.end) - target)),
        max_level_residual=plan.report.max_level_residual,
        steps=plan.report.steps,
    )


class TaskPlanner:
    """The tasking planner as a callable (a, A) -> TaskPlan."""

    def __init__(self, g: GermSpec, steps: Optional[int] = None):
        self.g = g
        self.steps = steps

    def __call__(self, a, target) -> TaskPlan:
        return plan_task(self.g, a, target, self.steps)


def project_planner(g: GermSpec, section, planner: Optional[TaskPlanner] = None) -> Callable[[Any, Any], PlanResult]:
    """
    Recovers a planner on the unit base sphere from a section s and a task
    planner: the path from b to b' stays at b for t <= 1/2, then follows
    f(alpha(s(b), b')(2t - 1)) / delta.

    Raises:
        SectionError: If no section is given.
    """
    if section is None:
        raise SectionError("A verified section is required to recover a base planner.")
    planner = TaskPlanner(g) if planner is None else planner

    def base_plan(b, b_prime) -> PlanResult:
        b = np.asarray(b, dtype=float)
        b_prime = np.asarray(b_prime, dtype=float)
        x = section(g.delta * b)
        task = planner(x, g.delta * b_prime)
        tail = Mapped(task.path, lambda y: g.map.eval(y) / g.delta)
        path = concat(constant(b), tail, tolerance=settings.RESIDUAL_LIMIT / g.delta)
        return PlanResult(region=task.region, path=path, margin=task_region(g, x, g.delta * b_prime, task.region)[1])

    return base_plan


def tc_value(g: GermSpec) -> int:
    """
    Topological complexity of f|: 2 for complex, arrangement and even-p germs,
    3 for real isolated-singularity (and trivial projection) germs with p odd.
    """
    if g.kind in (GermKind.COMPLEX_HOLOMORPHIC, GermKind.ARRANGEMENT):
        return 2
    if g.kind in (GermKind.REAL_ISOLATED, GermKind.TRIVIAL_PROJECTION):
        return 2 if g.p % 2 == 0 else 3
    raise SphereDomainError(f"Unknown germ kind {g.kind!r}.")
