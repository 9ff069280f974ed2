"""
Unit tests for tube membership, Newton retraction, fiber sampling and the
empirical tube check.
"""
import numpy as np
import pytest

from milnorplan.exceptions import DimensionMismatchError, RetractionError, SphereDomainError
from milnorplan.fibration import (
    ball_draw,
    check_tube,
    draw_rng,
    in_tube,
    minimal_norm_step,
    project_to_level,
    sample_fiber,
    smallest_singular_value,
    tube_point,
)
from milnorplan.germs import builtin_germ
from milnorplan.spheres import random_sphere_point


class TestInTube:
    """Residuals of tube membership."""

    def test_point_on_tube(self, projection):
        residuals = in_tube(projection, np.array([projection.delta, 0.0, 0.1]))
        assert residuals.inside
        assert residuals.level_residual == 0.0

    def test_point_off_level(self, projection):
        """||f(x)|| = 0.2 is far from delta."""
        residuals = in_tube(projection, np.array([0.2, 0.0, 0.0]))
        assert not residuals.inside
        assert residuals.level_residual == pytest.approx(0.2 - projection.delta)

    def test_point_outside_ball(self, projection):
        residuals = in_tube(projection, np.array([projection.delta, 0.0, 0.6]))
        assert not residuals.inside
        assert residuals.ball_residual > 0.0

    def test_tube_point_rejects_off_tube(self, projection):
        with pytest.raises(RetractionError) as exc_info:
            tube_point(projection, np.array([0.2, 0.0, 0.0]))
        assert exc_info.value.reason == "off-tube"

    def test_tube_point_caches_image(self, projection):
        point = tube_point(projection, np.array([0.0, projection.delta, 0.3]))
        assert np.array_equal(point.fx, np.array([0.0, projection.delta]))
        assert not point.x.flags.writeable


class TestProjectToLevel:
    """Minimal-norm Newton retraction."""

    def test_projection_converges_in_one_step(self, projection):
        """For a linear map the retraction only moves the constrained coordinates."""
        b = np.array([projection.delta, 0.0])
        x = project_to_level(projection, np.array([0.3, 0.1, 0.2]), b)
        assert np.allclose(x, [projection.delta, 0.0, 0.2], atol=1e-15)

    def test_rank_deficient_at_origin(self, z2w2):
        """The Jacobian of z^2 + w^2 vanishes at 0."""
        with pytest.raises(RetractionError) as exc_info:
            project_to_level(z2w2, np.zeros(4), np.array([z2w2.delta, 0.0]))
        assert exc_info.value.reason == "rank-deficient"

    def test_idempotent_on_fiber(self, z2w3, fiber_point, base_point):
        """A point already on the level set is returned unchanged."""
        x = fiber_point(z2w3).x
        assert np.array_equal(project_to_level(z2w3, x, base_point(z2w3)), x)

    def test_target_off_sphere(self, projection):
        with pytest.raises(SphereDomainError):
            project_to_level(projection, np.zeros(3), np.array([0.5, 0.0]))

    def test_target_dimension(self, projection):
        with pytest.raises(DimensionMismatchError):
            project_to_level(projection, np.zeros(3), np.array([projection.delta, 0.0, 0.0]))

    def test_residual_within_tolerance(self, fold):
        b = np.zeros(3)
        b[1] = fold.delta
        x = project_to_level(fold, np.array([0.01, 0.02, -0.01, 0.1]), b)
        assert np.linalg.norm(fold.map.eval(x) - b) <= 1e-10


class TestSampleFiber:
    """Seeded sampling of a single fiber."""

    def test_zero_count(self, z2w3, base_point):
        assert sample_fiber(z2w3, base_point(z2w3), 0) == []

    def test_samples_satisfy_complex_equation(self, z2w3, base_point):
        """z^2 + w^3 = delta at every sampled point."""
        points = sample_fiber(z2w3, base_point(z2w3), 5, seed=3)
        assert len(points) == 5
        for point in points:
            z, w = complex(point.x[0], point.x[1]), complex(point.x[2], point.x[3])
            assert abs(z ** 2 + w ** 3 - z2w3.delta) <= 1e-10
            assert np.linalg.norm(point.x) <= z2w3.epsilon

    def test_same_seed_same_points(self, z2w2, base_point):
        first = sample_fiber(z2w2, base_point(z2w2), 3, seed=11)
        second = sample_fiber(z2w2, base_point(z2w2), 3, seed=11)
        for a, b in zip(first, second):
            assert np.array_equal(a.x, b.x)

    def test_draw_streams_are_independent_of_order(self):
        """Stream (seed, k) does not depend on draws before it."""
        first = draw_rng(5, 2).standard_normal(3)
        draw_rng(5, 1).standard_normal(100)
        assert np.array_equal(draw_rng(5, 2).standard_normal(3), first)
        assert not np.array_equal(draw_rng(6, 2).standard_normal(3), first)


class TestCheckTube:
    """Empirical validation of the radii."""

    def test_projection_has_unit_singular_values(self, projection):
        report = check_tube(projection, trials=20, seed=0)
        assert report.passed
        assert report.min_singular_value == pytest.approx(1.0)
        assert report.crowding_fraction == 0.0

    def test_complex_germ_passes(self, z2w3):
        report = check_tube(z2w3, trials=30, seed=0)
        assert report.passed
        assert report.min_singular_value >= 1e-6

    def test_oversized_delta_fails(self, z2w2):
        """With delta = 0.4 every fiber point has ||x|| >= sqrt(0.4) > epsilon."""
        report = check_tube(z2w2.with_radii(delta=0.4), trials=20, seed=0)
        assert not report.passed
        assert report.crowding_fraction > 0.5

    def test_smallest_singular_value(self):
        jacobian = np.array([[3.0, 0.0, 0.0], [0.0, 0.5, 0.0]])
        assert smallest_singular_value(jacobian) == pytest.approx(0.5)

    @pytest.mark.parametrize("name", ["complex-z2w2", "complex-z2w3", "real-fold4to3"])
    def test_jacobian_full_rank_on_tube_samples(self, name):
        """Holomorphic and real isolated germs have sigma_min >= 1e-8 all over the tube."""
        g = builtin_germ(name)
        for trial in range(12):
            b = g.delta * random_sphere_point(draw_rng(3, trial), g.p - 1)
            point = sample_fiber(g, b, 1, [3, trial])[0]
            assert smallest_singular_value(g.map.jacobian(point.x)) >= 1e-8


class TestMinimalNormStep:
    """The Newton and lift step J^T (J J^T)^-1 r."""

    def test_step_solves_linearized_system(self, fold, rng):
        x = rng.uniform(-0.3, 0.3, size=4)
        jacobian = fold.map.jacobian(x)
        rhs = np.array([0.1, -0.2, 0.05])
        step = minimal_norm_step(jacobian, rhs)
        assert np.allclose(jacobian @ step, rhs, atol=1e-13)
        assert np.allclose(step, np.linalg.pinv(jacobian) @ rhs, atol=1e-12)

    def test_rank_deficient(self):
        with pytest.raises(RetractionError) as exc_info:
            minimal_norm_step(np.array([[1.0, 0.0], [2.0, 0.0]]), np.array([1.0, 2.0]))
        assert exc_info.value.reason == "rank-deficient"

    def test_ball_draw_stays_in_ball(self):
        rng = draw_rng(0, 1)
        assert all(np.linalg.norm(ball_draw(rng, 4, 0.5)) <= 0.5 for _ in range(50))
