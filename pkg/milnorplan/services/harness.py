"""
Verification suites for the sphere planners, the tube, transport, sections
and the tasking planner.

Every suite draws from the stream (seed, suite key, trial), so reports are
reproducible byte for byte and independent of suite order. Suites never
raise on numerical failure: a failing trial is counted and reported.
"""
import math
import zlib
from typing import Dict, List, Optional, Set

import numpy as np
import structlog

from ..config import settings
from ..exceptions import MilnorError
from ..germs.models import GermSpec
from ..models import AggregateReport, VerifyReport
from ..spheres.geometry import basis_vector, random_sphere_point
from ..spheres.paths import reverse
from ..spheres.planner import parity_of, plan_sphere, region_count, region_cover
from ..fibration.section import build_section_s1, radial_section, verify_section
from ..fibration.transport import base_loop, horizontal_lift, monodromy
from ..fibration.tube import ball_draw, check_tube, draw_rng, project_to_level, sample_fiber
from .taskplan import plan_task, tc_value

logger = structlog.get_logger(__name__)

SPHERE_DIMS = (1, 2, 3)
JACOBIAN_STEP = 1e-6
JACOBIAN_TOL = 1e-7


def suite_key(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


def _report(suite: str, subject: str, trials: int, failures: int, **fields) -> VerifyReport:
    report = VerifyReport(
        suite=suite,
        subject=subject,
        trials=trials,
        passes=trials - failures,
        failures=failures,
        passed=failures == 0,
        **fields,
    )
    logger.info("Suite finished", suite=suite, subject=subject, trials=trials, failures=failures)
    return report


def _perturb(rng: np.random.Generator, theta: np.ndarray, h: float) -> np.ndarray:
    w = theta + h * rng.standard_normal(theta.size)
    return w / np.linalg.norm(w)


def _sphere_pairs(m: int, trials: int, seed: int) -> List[tuple]:
    """Random pairs, with equal and antipodal pairs mixed in so every region is exercised."""
    key = suite_key("sphere")
    pairs = []
    if m % 2 == 0:
        e1 = basis_vector(m, 1)
        pairs += [(e1, -e1), (-e1, e1)]
    for trial in range(trials - len(pairs)):
        rng = draw_rng(seed, key, m, trial)
        theta1 = random_sphere_point(rng, m)
        if trial % 5 == 1:
            theta2 = -theta1
        elif trial % 7 == 2:
            theta2 = theta1.copy()
        else:
            theta2 = random_sphere_point(rng, m)
        pairs.append((theta1, theta2))
    return pairs


def verify_sphere(m: int, trials: int, seed: int = 0, samples: int = 256) -> VerifyReport:
    """
    Covering, endpoint, norm and continuity checks of the planner on S^m.
    For even m the exceptional pairs (e1, -e1) and (-e1, e1) are included.
    """
    if m < 1:
        raise MilnorError(f"Sphere suites need m >= 1, got {m}.", exit_code=2)
    logger.info("Running sphere suite", m=m, trials=trials)
    style = parity_of(m)
    pairs = _sphere_pairs(m, trials, seed)
    ts = np.linspace(0.0, 1.0, samples)

    failures = 0
    observed: Set[int] = set()
    endpoint_error = norm_error = 0.0
    moduli: Dict[str, float] = {}
    for trial, (theta1, theta2) in enumerate(pairs):
        cover = region_cover(theta1, theta2)
        if not cover:
            failures += 1
            continue
        plan = plan_sphere(theta1, theta2)
        observed.add(plan.region)
        values = plan.path.sample_at(ts)
        e_err = max(float(np.linalg.norm(values[0] - theta1)), float(np.linalg.norm(values[-1] - theta2)))
        n_err = float(np.max(np.abs(np.linalg.norm(values, axis=1) - 1.0)))
        endpoint_error = max(endpoint_error, e_err)
        norm_error = max(norm_error, n_err)
        if e_err > settings.ENDPOINT_TOL or n_err > 1e-9 or plan.region not in cover:
            failures += 1
            continue

        # empirical continuity modulus on pairs well inside their region
        if trial < 64 and plan.margin > 0.1:
            rng = draw_rng(seed, suite_key("continuity"), m, trial)
            h = 1e-4
            near1, near2 = _perturb(rng, theta1, h), _perturb(rng, theta2, h)
            near = plan_sphere(near1, near2)
            if near.region == plan.region and near.margin > 0.1:
                moved = max(np.linalg.norm(near1 - theta1), np.linalg.norm(near2 - theta2))
                gap = float(np.max(np.linalg.norm(near.path.sample_at(ts[::16]) - values[::16], axis=1)))
                key = f"region_{plan.region}"
                moduli[key] = max(moduli.get(key, 0.0), gap / moved)

    expected = region_count(style)
    if trials >= 2 * expected and len(observed) != expected:
        failures += 1
    return _report(
        "sphere",
        f"S^{m}",
        len(pairs),
        failures,
        worst_residuals={"endpoint": endpoint_error, "norm": norm_error},
        continuity_moduli=moduli,
        regions_observed=sorted(observed),
        details={"parity": style.value, "expected_regions": expected},
    )


def jacobian_gap(g: GermSpec, x: np.ndarray, h: float = JACOBIAN_STEP) -> float:
    """Largest entrywise gap between the exact Jacobian and central differences at x."""
    shifts = h * np.eye(g.n)
    numeric = (g.map.eval_many(x + shifts) - g.map.eval_many(x - shifts)).T / (2.0 * h)
    return float(np.max(np.abs(numeric - g.map.jacobian(x))))


def verify_tube(g: GermSpec, trials: int = 200, seed: int = 0) -> VerifyReport:
    """
    Tube validation, Newton idempotence, and Jacobian consistency at fiber
    points and at uniform draws from the epsilon-ball.
    """
    logger.info("Running tube suite", germ=g.name, trials=trials)
    key = suite_key("tube")
    check = check_tube(g, trials, [seed, key])
    failures = 0 if check.passed else 1

    idempotence = jacobian_error = 0.0
    checks = 0
    for trial in range(min(trials, 32)):
        rng = draw_rng(seed, key, trial)
        b = g.delta * random_sphere_point(rng, g.p - 1)
        jacobian_error = max(jacobian_error, jacobian_gap(g, ball_draw(rng, g.n, g.epsilon)))
        try:
            x = sample_fiber(g, b, 1, [seed, key, trial])[0].x
            again = project_to_level(g, x, b)
        except MilnorError:
            failures += 1
            continue
        checks += 1
        idempotence = max(idempotence, float(np.linalg.norm(again - x)))
        jacobian_error = max(jacobian_error, jacobian_gap(g, x))

    if idempotence > 1e-9 or jacobian_error > JACOBIAN_TOL:
        failures += 1
    return _report(
        "tube",
        g.name,
        1 + checks,
        failures,
        worst_residuals={"idempotence": idempotence, "jacobian": jacobian_error},
        details=check.model_dump(),
    )


def verify_transport(g: GermSpec, seed: int = 0, steps: Optional[int] = None) -> VerifyReport:
    """
    Tracking residual over the full base loop, forward-backward return, and
    RK4 self-convergence (error ratio between halved step sizes).
    """
    steps = settings.TRANSPORT_STEPS if steps is None else steps
    logger.info("Running transport suite", germ=g.name, steps=steps)
    key = suite_key("transport")
    failures = 0
    worst: Dict[str, float] = {}
    details: Dict[str, object] = {}
    try:
        b0 = np.zeros(g.p)
        b0[0] = g.delta
        x0 = sample_fiber(g, b0, 1, [seed, key])[0].x
        loop = base_loop(g, x0)
        _, forward = horizontal_lift(g, loop, x0, steps)
        worst["tracking"] = forward.max_level_residual
        y = np.asarray(forward.endpoint)
        details["displacement"] = float(np.linalg.norm(y - x0))

        if g.p == 2:
            back = monodromy(g, y, direction=-1, steps=steps)
            worst["return"] = float(np.linalg.norm(np.asarray(back.endpoint) - x0))
        else:
            _, back = horizontal_lift(g, reverse(loop), y, steps)
            worst["return"] = float(np.linalg.norm(np.asarray(back.endpoint) - x0))

        coarse = 32
        ends = [np.asarray(horizontal_lift(g, loop, x0, s)[1].endpoint) for s in (coarse, 2 * coarse)]
        reference = np.asarray(horizontal_lift(g, loop, x0, 16 * coarse)[1].endpoint)
        errors = [float(np.linalg.norm(e - reference)) for e in ends]
        details["coarse_error"], details["fine_error"] = errors
        ratio = errors[0] / errors[1] if errors[1] > 1e-11 else math.inf
        details["convergence_ratio"] = ratio if math.isfinite(ratio) else "n/a"

        if forward.max_level_residual > settings.RESIDUAL_LIMIT:
            failures += 1
        if worst["return"] > 1e-5:
            failures += 1
        if errors[1] > 1e-11 and ratio < 8.0:
            failures += 1
    except MilnorError as e:
        logger.error("Transport suite aborted", germ=g.name, error=e.message)
        failures += 1
        details["error"] = e.message
    return _report("transport", g.name, 3, failures, worst_residuals=worst, details=details)


def verify_section_cmd(g: GermSpec, seed: int = 0, samples: int = 360) -> VerifyReport:
    """
    Builds and verifies a section: the monodromy-corrected circle section for
    p = 2, the radial section (defect reported only) for p >= 3.
    """
    logger.info("Running section suite", germ=g.name, samples=samples)
    key = suite_key("section")
    details: Dict[str, object] = {}
    try:
        if g.p == 2:
            section = build_section_s1(g, seed=[seed, key])
            report = verify_section(g, section, samples)
        else:
            pole = np.zeros(g.p)
            pole[0] = g.delta
            x0 = sample_fiber(g, pole, 1, [seed, key])[0]
            section = radial_section(g, pole, x0, seed=[seed, key])
            report = verify_section(g, section, min(samples, 32), seed=[seed, key])
            details["radial"] = True
    except MilnorError as e:
        logger.error("Section suite aborted", germ=g.name, error=e.message)
        return _report("section", g.name, 1, 1, details={"error": e.message})

    details.update(report.model_dump())
    return _report(
        "section",
        g.name,
        report.samples,
        0 if report.passed else 1,
        worst_residuals={"section": report.max_residual, "closure": report.closure_defect},
        details=details,
    )


def _task(g: GermSpec, seed: int, trial: int):
    rng = draw_rng(seed, suite_key("task"), trial)
    b = g.delta * random_sphere_point(rng, g.p - 1)
    a = sample_fiber(g, b, 1, [seed, suite_key("task"), trial])[0].x
    if trial % 7 == 3:
        target = g.map.eval(a)
        target = g.delta * target / np.linalg.norm(target)
    elif trial % 5 == 1:
        target = -g.delta * b / np.linalg.norm(b)
    else:
        target = g.delta * random_sphere_point(rng, g.p - 1)
    return a, target


def verify_task(g: GermSpec, trials: int = 1000, seed: int = 0, samples: Optional[int] = None) -> VerifyReport:
    """
    Endpoint contract, tube adherence, compositionality and region economy of
    the tasking planner over random (a, A). By default the paths are sampled
    on the lift grid (TASK_STEPS + 1 parameters), where they are stored.
    """
    logger.info("Running task suite", germ=g.name, trials=trials)
    tc = tc_value(g)
    samples = settings.TASK_STEPS + 1 if samples is None else samples
    ts = np.linspace(0.0, 1.0, samples)
    failures = 0
    observed: Set[int] = set()
    worst = {"endpoint": 0.0, "adherence": 0.0, "compositionality": 0.0}
    moduli: Dict[str, float] = {}
    errors: List[str] = []

    for trial in range(trials):
        try:
            a, target = _task(g, seed, trial)
            plan = plan_task(g, a, target)
            values = plan.path.sample_at(ts)
        except MilnorError as e:
            failures += 1
            errors.append(e.message)
            continue
        observed.add(plan.region)

        images = g.map.eval_many(values)
        endpoint = float(np.linalg.norm(images[-1] - target))
        adherence = float(np.max(np.abs(np.linalg.norm(images, axis=1) - g.delta)))
        composition = float(np.max(np.linalg.norm(images - g.delta * plan.base_path.sample_at(ts), axis=1)))
        worst["endpoint"] = max(worst["endpoint"], endpoint)
        worst["adherence"] = max(worst["adherence"], adherence)
        worst["compositionality"] = max(worst["compositionality"], composition)

        ok = (
            np.array_equal(values[0], a)
            and endpoint <= settings.RESIDUAL_LIMIT
            and adherence <= settings.ADHERENCE_TOL
            and composition <= settings.RESIDUAL_LIMIT
            and float(np.max(np.linalg.norm(values, axis=1))) <= g.epsilon + settings.BALL_SLACK
            and 1 <= plan.region <= tc
        )
        if not ok:
            failures += 1
            continue

        if trial < 16 and not np.array_equal(values[0], values[-1]):
            rng = draw_rng(seed, suite_key("task-continuity"), trial)
            h = 1e-6
            try:
                near_a = project_to_level(g, a + h * rng.standard_normal(g.n), g.map.eval(a))
                near = plan_task(g, near_a, target)
            except MilnorError:
                continue
            if near.region == plan.region:
                moved = float(np.linalg.norm(near_a - a))
                gap = float(np.max(np.linalg.norm(near.path.sample_at(ts[::32]) - values[::32], axis=1)))
                if moved > 0.0:
                    key = f"region_{plan.region}"
                    moduli[key] = max(moduli.get(key, 0.0), gap / moved)

    if len(observed) > tc:
        failures += 1
    details: Dict[str, object] = {"tc_value": tc}
    if errors:
        details["first_error"] = errors[0]
    return _report(
        "task",
        g.name,
        trials,
        failures,
        worst_residuals=worst,
        continuity_moduli=moduli,
        regions_observed=sorted(observed),
        details=details,
    )


def verify_all(g: GermSpec, seed: int = 0, trials: int = 1000, sphere_trials: int = 10000) -> AggregateReport:
    """Runs every suite for `g` plus the sphere suites; reports ordered by suite name."""
    logger.info("Running all suites", germ=g.name, seed=seed)
    reports = [verify_sphere(m, sphere_trials, seed) for m in SPHERE_DIMS]
    reports.append(verify_tube(g, min(trials, 200), seed))
    reports.append(verify_transport(g, seed))
    reports.append(verify_section_cmd(g, seed))
    reports.append(verify_task(g, trials, seed))
    reports.sort(key=lambda r: (r.suite, r.subject))
    return AggregateReport(seed=seed, suites=reports, passed=all(r.passed for r in reports))
