"""
Constructive cross-sections s of the Milnor fibration, f(s(b)) = b.

Over the circle (p = 2) a lifted loop does not close, so the section is
corrected by the monodromy: with y = M^-1(x0) and a path beta from x0 to y
inside the fiber, s(theta) = P_theta(beta(theta / 2 pi)) where P_theta is
transport along the arc from (delta, 0) to delta e^{i theta}. Then
s(2 pi) = M(y) = x0 = s(0).

For p >= 3 only the radial section is built: transport of x0 along
meridians from a pole, continuous away from the antipode, reported together
with its spread around the antipode.
"""
import math
from typing import Callable, List, Optional

import numpy as np
import structlog

from ..config import settings
from ..exceptions import FiberPathError, RetractionError, SectionError, SphereDomainError, TransportError
from ..germs.models import GermSpec
from ..models import SectionReport
from ..spheres.geometry import random_sphere_point
from ..spheres.paths import Constant, Path, scaled
from ..spheres.planner import geodesic_section
from .transport import circle_arc, horizontal_lift, monodromy
from .tube import Seed, TubePoint, draw_rng, in_tube, project_to_level, sample_fiber, tube_point

logger = structlog.get_logger(__name__)


class FiberPath(Path):
    """A polyline through fiber points, retracted pointwise onto the fiber over b."""

    def __init__(self, g: GermSpec, b: np.ndarray, nodes: List[np.ndarray]):
        super().__init__(nodes[0], nodes[-1])
        self.g = g
        self.b = np.asarray(b, dtype=float)
        self.nodes = [np.asarray(node, dtype=float) for node in nodes]

    def _interior(self, t: float) -> np.ndarray:
        pieces = len(self.nodes) - 1
        k = min(int(t * pieces), pieces - 1)
        w = t * pieces - k
        guess = (1.0 - w) * self.nodes[k] + w * self.nodes[k + 1]
        return project_to_level(self.g, guess, self.b)


def _accept(path: FiberPath, samples: int) -> bool:
    """Every sample retracts with small residual and consecutive samples do not jump branches."""
    try:
        values = path.sample(samples)
    except RetractionError:
        return False
    residuals = np.linalg.norm(path.g.map.eval_many(values) - path.b, axis=1)
    if residuals.max() > settings.RESIDUAL_LIMIT:
        return False
    length = sum(np.linalg.norm(b - a) for a, b in zip(path.nodes, path.nodes[1:]))
    jumps = np.linalg.norm(np.diff(values, axis=0), axis=1)
    return bool(jumps.max() <= 10.0 * length / (samples - 1) + 1e-12)


def fiber_path(
    g: GermSpec,
    b: np.ndarray,
    x_start,
    x_end,
    waypoints: int = 1,
    seed: Seed = 0,
) -> Path:
    """
    Joins two points of the fiber over b inside the fiber.

    Tries the straight segment retracted pointwise first, then up to
    FIBER_PATH_ATTEMPTS polylines through `waypoints` randomized intermediate
    fiber points.

    Raises:
        FiberPathError: If the endpoints are off the fiber or no attempt
            yields a valid path.
    """
    b = np.asarray(b, dtype=float)
    start = np.asarray(x_start.x if isinstance(x_start, TubePoint) else x_start, dtype=float)
    end = np.asarray(x_end.x if isinstance(x_end, TubePoint) else x_end, dtype=float)
    for name, point in (("start", start), ("end", end)):
        residual = float(np.linalg.norm(g.map.eval(point) - b))
        if residual > settings.TUBE_TOL:
            raise FiberPathError(f"Fiber path {name} is off the fiber (residual {residual:.3e}).")

    if np.array_equal(start, end):
        return Constant(start)

    samples = settings.FIBER_PATH_SAMPLES
    candidate = FiberPath(g, b, [start, end])
    if _accept(candidate, samples):
        return candidate

    scale = float(np.linalg.norm(end - start))
    for attempt in range(1, settings.FIBER_PATH_ATTEMPTS + 1):
        rng = draw_rng(seed, attempt)
        nodes = [start]
        try:
            for j in range(1, waypoints + 1):
                noise = 0.5 * scale * rng.standard_normal(g.n) / math.sqrt(g.n)
                guess = start + (j / (waypoints + 1)) * (end - start) + noise
                nodes.append(project_to_level(g, guess, b))
        except RetractionError:
            continue
        nodes.append(end)
        candidate = FiberPath(g, b, nodes)
        if _accept(candidate, samples):
            logger.info("Fiber path found through waypoints", germ=g.name, attempt=attempt, waypoints=waypoints)
            return candidate

    logger.error("No fiber path found", germ=g.name, attempts=settings.FIBER_PATH_ATTEMPTS)
    raise FiberPathError(f"Could not join the fiber points after {settings.FIBER_PATH_ATTEMPTS} attempts.")


class SectionS1:
    """
    A section over S^1_delta: theta -> P_theta(beta(theta / 2 pi)).

    `at_angle(theta)` takes theta in [0, 2 pi]; calling the section with a
    base point b uses the angle of b in [0, 2 pi).
    """

    def __init__(self, g: GermSpec, x0: np.ndarray, beta: Path, steps: Optional[int] = None):
        self.g = g
        self.x0 = np.asarray(x0, dtype=float)
        self.beta = beta
        self.steps = settings.SECTION_STEPS if steps is None else steps
        self._closure: Optional[float] = None

    def at_angle(self, theta: float) -> np.ndarray:
        fraction = theta / (2.0 * math.pi)
        start = self.beta(fraction)
        if fraction <= 0.0:
            return start
        steps = max(1, math.ceil(self.steps * fraction))
        path, _ = horizontal_lift(self.g, circle_arc(self.g.delta, theta), start, steps)
        return path.end

    def __call__(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        return self.at_angle(math.atan2(b[1], b[0]) % (2.0 * math.pi))

    def closure_defect(self) -> float:
        if self._closure is None:
            self._closure = float(np.linalg.norm(self.at_angle(0.0) - self.at_angle(2.0 * math.pi)))
        return self._closure


def build_section_s1(
    g: GermSpec,
    seed: Seed = 0,
    x0=None,
    steps: Optional[int] = None,
) -> SectionS1:
    """
    Builds the monodromy-corrected section over S^1_delta.

    Raises:
        SectionError: If p != 2 or the closure defect exceeds CLOSURE_LIMIT.
        FiberPathError: If x0 cannot be joined to M^-1(x0) inside the fiber.
        TransportError: If a lift fails.
    """
    if g.p != 2:
        raise SectionError(f"Circle sections need p=2, got p={g.p}.")
    steps = settings.SECTION_STEPS if steps is None else steps
    b0 = np.array([g.delta, 0.0])
    if x0 is None:
        x0 = sample_fiber(g, b0, 1, seed)[0]
    x0 = np.asarray(x0.x if isinstance(x0, TubePoint) else x0, dtype=float)

    logger.info("Building circle section", germ=g.name, steps=steps)
    reverse = monodromy(g, x0, direction=-1, steps=steps)
    y = np.asarray(reverse.endpoint)
    beta = fiber_path(g, b0, x0, y, seed=seed)
    section = SectionS1(g, x0, beta, steps)

    defect = section.closure_defect()
    if defect > settings.CLOSURE_LIMIT:
        logger.error("Section does not close", germ=g.name, closure_defect=defect)
        raise SectionError(f"Section closure defect {defect:.3e} exceeds {settings.CLOSURE_LIMIT:.1e}.")
    logger.info("Circle section built", germ=g.name, closure_defect=defect, monodromy_displacement=reverse.displacement)
    return section


class ExplicitSection:
    """A section given in closed form, b -> x."""

    def __init__(self, g: GermSpec, func: Callable[[np.ndarray], np.ndarray]):
        self.g = g
        self._func = func

    def __call__(self, b: np.ndarray) -> np.ndarray:
        return np.asarray(self._func(np.asarray(b, dtype=float)), dtype=float)

    def at_angle(self, theta: float) -> np.ndarray:
        return self(self.g.delta * np.array([math.cos(theta), math.sin(theta)]))

    def closure_defect(self) -> float:
        if self.g.p != 2:
            return 0.0
        return float(np.linalg.norm(self.at_angle(0.0) - self.at_angle(2.0 * math.pi)))


def projection_section(g: GermSpec, rest: np.ndarray) -> ExplicitSection:
    """The section b -> (b, rest) of a coordinate projection germ."""
    rest = np.asarray(rest, dtype=float)
    if rest.size != g.n - g.p:
        raise SectionError(f"Projection sections need {g.n - g.p} free coordinates, got {rest.size}.")
    return ExplicitSection(g, lambda b: np.concatenate([b, rest]))


class RadialSection:
    """
    Transport of x0 along meridians from the pole; undefined at the antipode.
    `closure_defect` holds the spread of the section near the antipode.
    """

    def __init__(self, g: GermSpec, pole: np.ndarray, x0: np.ndarray, steps: Optional[int] = None):
        self.g = g
        self.pole = np.asarray(pole, dtype=float) / g.delta
        self.x0 = np.asarray(x0, dtype=float)
        self.steps = settings.SECTION_STEPS if steps is None else steps
        self.defect: Optional[float] = None

    def meridian(self, b: np.ndarray) -> Path:
        theta = np.asarray(b, dtype=float) / self.g.delta
        if np.array_equal(theta, self.pole):
            return Constant(self.g.delta * self.pole)
        try:
            return scaled(geodesic_section(self.pole, theta), self.g.delta)
        except SphereDomainError as e:
            raise SectionError("The radial section is undefined at the antipode of the pole.") from e

    def __call__(self, b: np.ndarray) -> np.ndarray:
        path, _ = horizontal_lift(self.g, self.meridian(b), self.x0, self.steps)
        return path.end

    def closure_defect(self) -> float:
        return 0.0 if self.defect is None else self.defect


def radial_section(
    g: GermSpec,
    pole: np.ndarray,
    x0,
    steps: Optional[int] = None,
    seed: Seed = 0,
) -> RadialSection:
    """
    Builds the radial section for p >= 3 and measures its closure defect.

    Points s(w_k) on a small sphere around the antipode are transported along
    short arcs into the antipode fiber; the defect is the diameter of the
    resulting set. A trivial bundle gives zero.

    Raises:
        SectionError: If p < 3 or x0 is not over the pole.
        TransportError: If a lift fails.
    """
    if g.p < 3:
        raise SectionError(f"Radial sections are built for p >= 3, got p={g.p}.")
    pole = np.asarray(pole, dtype=float)
    x0 = np.asarray(x0.x if isinstance(x0, TubePoint) else x0, dtype=float)
    if np.linalg.norm(g.map.eval(x0) - pole) > settings.TUBE_TOL:
        raise SectionError("x0 is not on the fiber over the pole.")

    section = RadialSection(g, pole, x0, steps)
    antipode = -section.pole
    radius = settings.RADIAL_CIRCLE_RADIUS

    logger.info("Building radial section", germ=g.name, samples=settings.RADIAL_CIRCLE_SAMPLES)
    landed = []
    for k in range(settings.RADIAL_CIRCLE_SAMPLES):
        rng = draw_rng(seed, k)
        direction = random_sphere_point(rng, g.p - 1)
        direction -= (direction @ antipode) * antipode
        direction /= np.linalg.norm(direction)
        w = math.cos(radius) * antipode + math.sin(radius) * direction
        value = section(g.delta * w)
        arc = scaled(geodesic_section(w, antipode), g.delta)
        path, _ = horizontal_lift(g, arc, value, max(1, math.ceil(section.steps * radius)))
        landed.append(path.end)

    landed = np.array(landed)
    spread = np.linalg.norm(landed[:, None, :] - landed[None, :, :], axis=2)
    section.defect = float(spread.max())
    logger.info("Radial section built", germ=g.name, closure_defect=section.defect)
    return section


def verify_section(g: GermSpec, s, samples: int, seed: Seed = 0) -> SectionReport:
    """
    Evaluates f(s(b)) - b at `samples` base points.

    Circle sections are sampled at equally spaced angles; sections over
    higher spheres at seeded random base points (away from the antipode of a
    radial section's pole).
    """
    if g.p == 2:
        angles = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
        bases = [g.delta * np.array([math.cos(a), math.sin(a)]) for a in angles]
    else:
        bases = []
        pole = getattr(s, "pole", None)
        k = 0
        while len(bases) < samples:
            theta = random_sphere_point(draw_rng(seed, k), g.p - 1)
            k += 1
            if pole is not None and theta @ pole < -0.5:
                continue
            bases.append(g.delta * theta)

    max_residual = 0.0
    violations = 0
    for b in bases:
        try:
            value = s(b)
        except (TransportError, SectionError) as e:
            logger.error("Section evaluation failed", germ=g.name, error=e.message)
            max_residual = math.inf
            continue
        max_residual = max(max_residual, float(np.linalg.norm(g.map.eval(value) - b)))
        if not in_tube(g, value).inside:
            violations += 1

    closure = s.closure_defect() if hasattr(s, "closure_defect") else 0.0
    passed = (
        max_residual <= settings.RESIDUAL_LIMIT
        and violations == 0
        and (g.p != 2 or closure <= settings.CLOSURE_LIMIT)
    )
    report = SectionReport(
        germ=g.name,
        samples=len(bases),
        max_residual=max_residual,
        closure_defect=closure,
        tube_violations=violations,
        passed=passed,
    )
    logger.info("Section verified", **report.model_dump())
    return report
