"""
Horizontal path lifting through the Milnor fibration f|: M(delta, epsilon) -> S^{p-1}_delta.

The connection is the Euclidean normal one: horizontal vectors lie in the
rowspace of the Jacobian, so the lift solves x' = J^T (J J^T)^-1 b'(t). Each
RK4 step is followed by a Newton correction onto the level f = b(t).
"""
import math
from typing import Optional, Tuple

import numpy as np
import structlog

from ..config import settings
from ..exceptions import RetractionError, SphereDomainError, TransportError
from ..germs.models import GermSpec
from ..models import TransportReport
from ..spheres.paths import Constant, Path, Segment
from .tube import TubePoint, minimal_norm_step, project_to_level, tube_point

logger = structlog.get_logger(__name__)

NODE_SNAP = 1e-12


class TubePath(Path):
    """
    A lifted path stored as its integration nodes. Parameters on a node (up to
    NODE_SNAP) return the stored node; values between nodes are interpolated
    linearly and retracted onto the level f = base(t), so every evaluation
    lies in the tube.
    """

    def __init__(self, g: GermSpec, base: Path, ts: np.ndarray, xs: np.ndarray):
        super().__init__(xs[0], xs[-1])
        self.g = g
        self.base = base
        self.ts = ts
        self.xs = xs

    def _interior(self, t: float) -> np.ndarray:
        return self._interior_batch(np.array([t]))[0]

    def _interior_batch(self, ts: np.ndarray) -> np.ndarray:
        k = np.clip(np.searchsorted(self.ts, ts, side="right") - 1, 0, self.ts.size - 2)
        t0, t1 = self.ts[k], self.ts[k + 1]
        out = np.empty((ts.size, self.dim))
        at_lower = np.abs(ts - t0) <= NODE_SNAP
        at_upper = ~at_lower & (np.abs(t1 - ts) <= NODE_SNAP)
        out[at_lower] = self.xs[k[at_lower]]
        out[at_upper] = self.xs[k[at_upper] + 1]

        between = np.flatnonzero(~(at_lower | at_upper))
        if between.size:
            w = ((ts - t0) / (t1 - t0))[between, None]
            guesses = (1.0 - w) * self.xs[k[between]] + w * self.xs[k[between] + 1]
            targets = self.base.sample_at(ts[between])
            for row, guess, b in zip(between, guesses, targets):
                out[row] = project_to_level(self.g, guess, b)
        return out


def horizontal_velocity(g: GermSpec, x: np.ndarray, bdot: np.ndarray) -> np.ndarray:
    """
    The horizontal vector at x projecting to bdot: J^T (J J^T)^-1 bdot.

    Raises:
        RetractionError: If the Jacobian at x is rank-deficient.
    """
    return minimal_norm_step(g.map.jacobian(x), bdot)


def horizontal_lift(
    g: GermSpec,
    base: Path,
    x0,
    steps: Optional[int] = None,
) -> Tuple[Path, TransportReport]:
    """
    Lifts `base` (a path on S^{p-1}_delta) horizontally, starting at x0.

    Args:
        g: The germ.
        base: Base path with ||f(x0) - base(0)|| <= TUBE_TOL.
        x0: Start point (TubePoint or array).
        steps: RK4 steps over [0, 1] (default TRANSPORT_STEPS).

    Returns:
        The lifted path (alpha(0) = x0 exactly) and its TransportReport.

    Raises:
        TransportError: On an off-fiber start, rank deficiency, ball exit or
            residual blow-up; carries the offending t-interval.
    """
    steps = settings.TRANSPORT_STEPS if steps is None else steps
    if steps < 1:
        raise TransportError(f"A lift needs at least one step, got {steps}.")
    x0 = np.array(x0.x if isinstance(x0, TubePoint) else x0, dtype=float)
    gap = float(np.linalg.norm(g.map.eval(x0) - base(0.0)))
    if gap > settings.TUBE_TOL:
        raise TransportError(f"Start point is not over base(0): residual {gap:.3e}.", interval=(0.0, 0.0))

    if isinstance(base, Constant):
        report = TransportReport(
            endpoint=x0.tolist(),
            max_level_residual=gap,
            max_ball_excess=float(np.linalg.norm(x0)) - g.epsilon,
            steps=0,
        )
        return Constant(x0), report

    ts = np.linspace(0.0, 1.0, steps + 1)
    # base values and rates for every node and RK4 midpoint, sampled in one pass
    targets = base.sample_at(ts)
    node_rates = base.derivative_at(ts)
    mid_rates = base.derivative_at(ts[:-1] + 0.5 * np.diff(ts))
    xs = np.empty((steps + 1, g.n))
    xs[0] = x0
    limit = g.epsilon + settings.BALL_SLACK
    max_residual = gap
    max_excess = float(np.linalg.norm(x0)) - g.epsilon

    x = x0
    for k in range(steps):
        t, h = ts[k], ts[k + 1] - ts[k]
        interval = (float(t), float(ts[k + 1]))
        try:
            k1 = horizontal_velocity(g, x, node_rates[k])
            k2 = horizontal_velocity(g, x + h * k1 / 2, mid_rates[k])
            k3 = horizontal_velocity(g, x + h * k2 / 2, mid_rates[k])
            k4 = horizontal_velocity(g, x + h * k3, node_rates[k + 1])
            x = x + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
            x = project_to_level(g, x, targets[k + 1])
        except RetractionError as e:
            logger.error("Horizontal lift failed", germ=g.name, reason=e.reason, t0=interval[0], t1=interval[1])
            raise TransportError(f"Lift failed ({e.reason}): {e.message}", interval=interval) from e

        norm = float(np.linalg.norm(x))
        if norm > limit:
            logger.error("Lift left the ball", germ=g.name, norm=norm, t0=interval[0], t1=interval[1])
            raise TransportError(f"Lift left the epsilon-ball (||x||={norm:.6f}).", interval=interval)
        residual = float(np.linalg.norm(g.map.eval(x) - targets[k + 1]))
        if residual > settings.RESIDUAL_LIMIT:
            raise TransportError(f"Level residual blew up to {residual:.3e}.", interval=interval)

        max_residual = max(max_residual, residual)
        max_excess = max(max_excess, norm - g.epsilon)
        xs[k + 1] = x

    xs.setflags(write=False)
    report = TransportReport(
        endpoint=xs[-1].tolist(),
        max_level_residual=max_residual,
        max_ball_excess=max_excess,
        steps=steps,
    )
    logger.debug("Horizontal lift finished", germ=g.name, steps=steps, residual=max_residual)
    return TubePath(g, base, ts, xs), report


def circle_arc(delta: float, angle: float) -> Path:
    """t -> delta (cos(angle t), sin(angle t)), ending exactly at delta e^{i angle}."""
    end = delta * np.array([math.cos(angle), math.sin(angle)])
    if angle == 2.0 * math.pi or angle == -2.0 * math.pi:
        end = np.array([delta, 0.0])
    return Segment(
        lambda t: delta * np.array([math.cos(angle * t), math.sin(angle * t)]),
        np.array([delta, 0.0]),
        end,
        batch=lambda ts: delta * np.column_stack([np.cos(angle * ts), np.sin(angle * ts)]),
    )


def great_circle_loop(delta: float, u: np.ndarray, v: np.ndarray) -> Path:
    """The closed loop t -> delta (cos 2 pi t u + sin 2 pi t v) for orthonormal u, v."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    return Segment(
        lambda t: delta * (math.cos(2.0 * math.pi * t) * u + math.sin(2.0 * math.pi * t) * v),
        delta * u,
        delta * u,
        batch=lambda ts: delta * (np.outer(np.cos(2.0 * np.pi * ts), u) + np.outer(np.sin(2.0 * np.pi * ts), v)),
    )


def base_loop(g: GermSpec, x0: np.ndarray) -> Path:
    """A closed great circle on S^{p-1}_delta through f(x0)."""
    fx = g.map.eval(x0)
    u = fx / np.linalg.norm(fx)
    if g.p == 2:
        v = np.array([-u[1], u[0]])
    else:
        v = np.zeros(g.p)
        v[int(np.argmin(np.abs(u)))] = 1.0
        v -= (v @ u) * u
    return great_circle_loop(g.delta, u, v / np.linalg.norm(v))


def monodromy(g: GermSpec, x0, direction: int = 1, steps: Optional[int] = None) -> TransportReport:
    """
    Transports x0 once around the base circle S^1_delta.

    Args:
        direction: +1 for counter-clockwise, -1 for the reverse loop.

    Raises:
        SphereDomainError: If p != 2 or direction is not +-1.
        TransportError: As horizontal_lift.
    """
    if g.p != 2:
        raise SphereDomainError(f"Monodromy needs a circle base (p=2), got p={g.p}.")
    if direction not in (1, -1):
        raise SphereDomainError(f"Loop direction must be +1 or -1, got {direction}.")
    x0 = np.asarray(x0.x if isinstance(x0, TubePoint) else x0, dtype=float)

    logger.info("Computing monodromy", germ=g.name, direction=direction)
    _, report = horizontal_lift(g, circle_arc(g.delta, direction * 2.0 * math.pi), x0, steps)
    displacement = float(np.linalg.norm(np.asarray(report.endpoint) - x0))
    logger.info("Monodromy finished", germ=g.name, displacement=displacement, residual=report.max_level_residual)
    return report.model_copy(update={"displacement": displacement})


def parallel_transport(g: GermSpec, arc: Path, x, steps: Optional[int] = None) -> TubePoint:
    """Transports x from the fiber over arc(0) to the fiber over arc(1)."""
    path, _ = horizontal_lift(g, arc, x, steps)
    return tube_point(g, path.end)
