"""
The Milnor tube M(delta, epsilon) = f^-1(S^{p-1}_delta) ∩ D^n_epsilon as a
numeric constraint manifold.

Retraction onto a level set f = b uses minimal-norm Newton steps
x <- x - J^T (J J^T)^-1 (f(x) - b), through the eigendecomposition of the p x p
Gram matrix J J^T.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from ..config import settings
from ..exceptions import DimensionMismatchError, RetractionError, SamplingError, SphereDomainError
from ..germs.models import GermSpec
from ..models import TubeCheckReport, TubeResiduals
from ..spheres.geometry import random_sphere_point

logger = structlog.get_logger(__name__)

Seed = Union[int, Sequence[int]]


@dataclass(frozen=True)
class TubePoint:
    """A point x of the tube with its cached image fx = f(x)."""
    x: np.ndarray
    fx: np.ndarray


def draw_rng(seed: Seed, *keys: int) -> np.random.Generator:
    """
    Independent stream for (seed, keys...). Streams are split by index, so
    draw k gets the same numbers no matter how many draws precede it.
    """
    entropy = [int(s) for s in np.atleast_1d(seed)] + [int(k) for k in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def smallest_singular_value(jacobian: np.ndarray) -> float:
    """sigma_min of a full-row-rank p x n Jacobian, from the smallest eigenvalue of J J^T."""
    eigenvalues = np.linalg.eigvalsh(jacobian @ jacobian.T)
    return float(np.sqrt(max(eigenvalues[0], 0.0)))


def minimal_norm_step(jacobian: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    J^T (J J^T)^-1 rhs, from one symmetric eigendecomposition of J J^T.

    Raises:
        RetractionError: If sigma_min(J) < SIGMA_MIN.
    """
    eigenvalues, vectors = np.linalg.eigh(jacobian @ jacobian.T)
    sigma = float(np.sqrt(max(eigenvalues[0], 0.0)))
    if sigma < settings.SIGMA_MIN:
        raise RetractionError("rank-deficient", f"Jacobian is rank-deficient (sigma_min={sigma:.3e}).")
    return jacobian.T @ (vectors @ ((vectors.T @ rhs) / eigenvalues))


def in_tube(g: GermSpec, x: np.ndarray, tol: Optional[float] = None) -> TubeResiduals:
    """
    Membership of x in M(delta, epsilon).

    Returns the residuals (||f(x)|| - delta, ||x|| - epsilon); `inside` is set
    iff the first is within `tol` (default TUBE_TOL) and the second within
    the ball slack.
    """
    tol = settings.TUBE_TOL if tol is None else tol
    fx = g.map.eval(x)
    level = float(np.linalg.norm(fx)) - g.delta
    ball = float(np.linalg.norm(x)) - g.epsilon
    return TubeResiduals(
        level_residual=level,
        ball_residual=ball,
        inside=abs(level) <= tol and ball <= settings.BALL_SLACK,
    )


def tube_point(g: GermSpec, x: np.ndarray) -> TubePoint:
    """
    Wraps x as a TubePoint, checking the tube invariants.

    Raises:
        RetractionError: If x is not in the tube at TUBE_TOL.
    """
    x = np.array(x, dtype=float)
    residuals = in_tube(g, x)
    if not residuals.inside:
        logger.error(
            "Point violates tube invariants",
            germ=g.name,
            level_residual=residuals.level_residual,
            ball_residual=residuals.ball_residual,
        )
        raise RetractionError(
            "off-tube",
            f"Point is not in the tube: level residual {residuals.level_residual:.3e}, "
            f"ball residual {residuals.ball_residual:.3e}.",
        )
    x.setflags(write=False)
    fx = g.map.eval(x)
    fx.setflags(write=False)
    return TubePoint(x=x, fx=fx)


def project_to_level(
    g: GermSpec,
    x: np.ndarray,
    b: np.ndarray,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> np.ndarray:
    """
    Retracts x onto the level set f = b with minimal-norm Newton steps.

    Args:
        g: The germ.
        x: Starting point in R^n; must be close enough to the level set.
        b: Target value with ||b|| = delta.
        tol: Residual tolerance ||f(x') - b|| (default NEWTON_TOL).
        max_iter: Iteration cap (default NEWTON_MAX_ITER).

    Raises:
        RetractionError: On a rank-deficient Jacobian, no convergence or an
            iterate leaving the epsilon-ball.
    """
    tol = settings.NEWTON_TOL if tol is None else tol
    max_iter = settings.NEWTON_MAX_ITER if max_iter is None else max_iter
    b = np.asarray(b, dtype=float)
    if b.shape != (g.p,):
        raise DimensionMismatchError(g.p, b.size, what="target value")
    if abs(np.linalg.norm(b) - g.delta) > 1e-9 * max(1.0, g.delta):
        raise SphereDomainError(f"Target value has norm {np.linalg.norm(b):.17g}, expected delta={g.delta}.")

    x = np.array(x, dtype=float)
    limit = g.epsilon + settings.BALL_SLACK
    for iteration in range(max_iter + 1):
        fx, jacobian = g.map.value_and_jacobian(x)
        residual = fx - b
        if np.linalg.norm(residual) <= tol:
            return x
        if iteration == max_iter:
            break

        x = x - minimal_norm_step(jacobian, residual)
        if np.linalg.norm(x) > limit:
            raise RetractionError("ball-exit", f"Newton iterate left the epsilon-ball (||x||={np.linalg.norm(x):.6f}).")

    raise RetractionError("no-convergence", f"Newton retraction did not converge in {max_iter} iterations.")


def ball_draw(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    direction = random_sphere_point(rng, n - 1)
    return radius * rng.random() ** (1.0 / n) * direction


def sample_fiber(g: GermSpec, b: np.ndarray, count: int, seed: Seed = 0) -> List[TubePoint]:
    """
    Samples `count` points of the fiber f^-1(b) by retracting uniform draws
    from the epsilon/2-ball. Draw k uses the stream (seed, k).

    Raises:
        SamplingError: If fewer than `count` retractions succeed within
            100 * count attempts.
    """
    points: List[TubePoint] = []
    attempts = 100 * count
    for draw in range(attempts):
        if len(points) == count:
            break
        rng = draw_rng(seed, draw)
        start = ball_draw(rng, g.n, 0.5 * g.epsilon)
        try:
            x = project_to_level(g, start, b)
        except RetractionError:
            continue
        if np.linalg.norm(x) <= g.epsilon:
            points.append(tube_point(g, x))

    if len(points) < count:
        logger.error("Fiber sampling failed", germ=g.name, requested=count, found=len(points), attempts=attempts)
        raise SamplingError(f"Found only {len(points)} of {count} fiber points after {attempts} attempts.")
    return points


def _check_trial(g: GermSpec, seed: Seed, trial: int) -> Tuple[str, float]:
    """One tube sample: ('ok' | 'crowded' | 'exit' | 'failed', sigma_min)."""
    for attempt in range(20):
        rng = draw_rng(seed, trial, attempt)
        b = g.delta * random_sphere_point(rng, g.p - 1)
        start = ball_draw(rng, g.n, 0.5 * g.epsilon)
        try:
            x = project_to_level(g, start, b)
        except RetractionError as e:
            if e.reason == "ball-exit":
                return "exit", 0.0
            continue
        sigma = smallest_singular_value(g.map.jacobian(x))
        if np.linalg.norm(x) > settings.CROWDING_RATIO * g.epsilon:
            return "crowded", sigma
        return "ok", sigma
    return "failed", 0.0


def check_tube(g: GermSpec, trials: int, seed: Seed = 0) -> TubeCheckReport:
    """
    Empirical validation of the tube radii.

    Samples the tube over random base points and reports the smallest
    singular value of the Jacobian and the fraction of samples crowding the
    ball boundary (||x|| > 0.9 epsilon, or a retraction leaving the ball).
    Passes iff sigma_min >= CHECK_SIGMA_MIN and crowding < CROWDING_LIMIT.
    """
    logger.info("Checking tube", germ=g.name, delta=g.delta, epsilon=g.epsilon, trials=trials)
    sigmas: List[float] = []
    crowded = failures = 0
    for trial in range(trials):
        outcome, sigma = _check_trial(g, seed, trial)
        if outcome == "failed":
            failures += 1
            continue
        if outcome in ("crowded", "exit"):
            crowded += 1
        if outcome != "exit":
            sigmas.append(sigma)

    min_sigma = min(sigmas) if sigmas else 0.0
    crowding = crowded / trials if trials else 0.0
    passed = bool(sigmas) and min_sigma >= settings.CHECK_SIGMA_MIN and crowding < settings.CROWDING_LIMIT

    report = TubeCheckReport(
        germ=g.name,
        trials=trials,
        samples=len(sigmas),
        failures=failures,
        min_singular_value=min_sigma,
        crowding_fraction=crowding,
        passed=passed,
    )
    logger.info("Tube check finished", **report.model_dump())
    return report
