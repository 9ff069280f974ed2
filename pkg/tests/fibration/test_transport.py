"""
Unit tests for horizontal lifting, monodromy and parallel transport.
"""
import math

import numpy as np
import pytest

from milnorplan.exceptions import SphereDomainError, TransportError
from milnorplan.fibration import (
    base_loop,
    circle_arc,
    horizontal_lift,
    horizontal_velocity,
    monodromy,
    parallel_transport,
)
from milnorplan.spheres import constant, scaled
from milnorplan.spheres.planner import geodesic_section

STEPS = 512


class TestHorizontalLift:
    """Lifts of base paths on S^{p-1}_delta."""

    def test_projection_loop_closes(self, projection):
        """The trivial bundle has identity monodromy."""
        x0 = np.array([projection.delta, 0.0, 0.1])
        path, report = horizontal_lift(projection, circle_arc(projection.delta, 2.0 * math.pi), x0, STEPS)
        assert np.array_equal(path.start, x0)
        assert np.linalg.norm(path.end - x0) <= 1e-8
        assert report.steps == STEPS
        assert report.max_level_residual <= 1e-6

    def test_lift_stays_over_base(self, z2w3, fiber_point):
        """Evaluations between integration nodes are retracted onto f = base(t)."""
        base = circle_arc(z2w3.delta, math.pi / 2)
        path, _ = horizontal_lift(z2w3, base, fiber_point(z2w3), 256)
        for t in (0.013, 0.37, 0.5, 0.9991):
            assert np.linalg.norm(z2w3.map.eval(path(t)) - base(t)) <= 1e-9

    def test_constant_base(self, z2w2, fiber_point, base_point):
        """A constant base path lifts to the constant path."""
        x0 = fiber_point(z2w2).x
        path, report = horizontal_lift(z2w2, constant(base_point(z2w2)), x0)
        assert report.steps == 0
        assert np.array_equal(path(0.5), x0)

    def test_start_off_base(self, projection):
        """x0 must lie over base(0)."""
        with pytest.raises(TransportError) as exc_info:
            horizontal_lift(projection, circle_arc(projection.delta, 1.0), np.array([0.0, projection.delta, 0.0]))
        assert exc_info.value.interval == (0.0, 0.0)

    def test_needs_a_step(self, projection):
        with pytest.raises(TransportError):
            horizontal_lift(projection, circle_arc(projection.delta, 1.0), np.array([projection.delta, 0.0, 0.0]), 0)

    def test_arc_on_higher_sphere(self, projection4to3):
        """Lifting a meridian arc of S^2_delta for the trivial bundle keeps the free coordinate."""
        delta = projection4to3.delta
        arc = scaled(geodesic_section(np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0])), delta)
        x0 = np.array([delta, 0.0, 0.0, -0.2])
        path, _ = horizontal_lift(projection4to3, arc, x0, 128)
        assert np.linalg.norm(projection4to3.map.eval(path.end) - arc.end) <= 1e-10
        assert path.end[3] == -0.2

    def test_grid_parameters_return_nodes(self, z2w3, fiber_point):
        """Sampling on the integration grid returns the stored nodes without retraction."""
        base = circle_arc(z2w3.delta, 1.0)
        path, _ = horizontal_lift(z2w3, base, fiber_point(z2w3), 64)
        grid = np.linspace(0.0, 1.0, 65)
        assert np.array_equal(path.sample_at(grid), path.xs)
        assert np.array_equal(path(grid[7]), path.xs[7])
        assert np.array_equal(path(grid[7] + 1e-13), path.xs[7])

    def test_batch_matches_pointwise(self, z2w3, fiber_point):
        base = circle_arc(z2w3.delta, 1.0)
        path, _ = horizontal_lift(z2w3, base, fiber_point(z2w3), 64)
        ts = np.array([0.0, 0.0101, 0.333, 0.5, 0.9876, 1.0])
        expected = np.array([path(t) for t in ts])
        assert np.allclose(path.sample_at(ts), expected, atol=1e-12)


class TestHorizontalVelocity:
    """The connection is orthogonal to the fibers."""

    def test_velocity_is_horizontal(self, z2w3, fiber_point):
        x = fiber_point(z2w3, seed=4).x
        bdot = np.array([0.3, -0.7])
        v = horizontal_velocity(z2w3, x, bdot)
        jacobian = z2w3.map.jacobian(x)
        assert np.allclose(jacobian @ v, bdot, atol=1e-12)
        _, _, vt = np.linalg.svd(jacobian)
        kernel = vt[z2w3.p:]
        assert np.max(np.abs(kernel @ v)) <= 1e-10 * np.linalg.norm(v)


class TestMonodromy:
    """Transport once around the base circle."""

    def test_z2w2_monodromy_is_half_turn(self, z2w2):
        """Along w = 0 the lift is z(t) = sqrt(delta) e^{i pi t}, ending at -x0."""
        x0 = np.array([math.sqrt(z2w2.delta), 0.0, 0.0, 0.0])
        report = monodromy(z2w2, x0, steps=STEPS)
        assert np.allclose(report.endpoint, -x0, atol=1e-8)
        assert report.displacement > 0.1 * np.linalg.norm(x0)
        assert np.linalg.norm(z2w2.map.eval(np.asarray(report.endpoint)) - np.array([z2w2.delta, 0.0])) <= 1e-6

    def test_reverse_loop_returns(self, z2w3, fiber_point):
        """Forward then backward monodromy returns to the start."""
        x0 = fiber_point(z2w3, seed=1).x
        forward = monodromy(z2w3, x0, direction=1, steps=STEPS)
        back = monodromy(z2w3, np.asarray(forward.endpoint), direction=-1, steps=STEPS)
        assert np.linalg.norm(np.asarray(back.endpoint) - x0) <= 1e-5

    def test_needs_circle_base(self, fold):
        with pytest.raises(SphereDomainError):
            monodromy(fold, np.zeros(4))

    def test_direction_checked(self, projection):
        with pytest.raises(SphereDomainError):
            monodromy(projection, np.array([projection.delta, 0.0, 0.0]), direction=2)


class TestLoopsAndArcs:
    def test_full_circle_ends_exactly_at_start(self):
        arc = circle_arc(0.01, -2.0 * math.pi)
        assert np.array_equal(arc.end, arc.start)
        assert np.allclose(arc(0.25), [0.0, -0.01])

    def test_base_loop_through_image(self, fold, fiber_point):
        """The loop is a closed great circle of S^2_delta starting at f(x0)."""
        x0 = fiber_point(fold).x
        loop = base_loop(fold, x0)
        assert np.allclose(loop.start, fold.map.eval(x0), atol=1e-8)
        assert np.array_equal(loop.start, loop.end)
        for t in (0.1, 0.5, 0.8):
            assert np.linalg.norm(loop(t)) == pytest.approx(fold.delta)

    def test_parallel_transport_lands_on_arc_end(self, z2w3, fiber_point):
        arc = circle_arc(z2w3.delta, 1.0)
        point = parallel_transport(z2w3, arc, fiber_point(z2w3), 256)
        assert np.linalg.norm(point.fx - arc.end) <= 1e-6
