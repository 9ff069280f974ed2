"""
Unit tests for the optimal motion planners on spheres.
"""
import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from milnorplan.exceptions import SphereDomainError
from milnorplan.spheres import (
    Parity,
    basis_vector,
    geodesic_section,
    nu_field,
    plan_even,
    plan_odd,
    plan_sphere,
    random_sphere_point,
    region_count,
    region_cover,
    region_member,
    v_field,
)

TS = np.linspace(0.0, 1.0, 256)


def assert_valid_plan(plan, theta1, theta2):
    """Exact endpoints and unit norm along the path."""
    values = np.array([plan.path(t) for t in TS])
    assert np.array_equal(values[0], theta1)
    assert np.array_equal(values[-1], theta2)
    assert np.max(np.abs(np.linalg.norm(values, axis=1) - 1.0)) <= 1e-9


class TestGeodesicSection:
    def test_same_point_is_constant(self):
        """s1(theta, theta) stays at theta."""
        theta = np.array([0.6, 0.8])
        path = geodesic_section(theta, theta)
        assert np.array_equal(path(0.3), theta)

    def test_quarter_circle_midpoint(self):
        """The chord from e1 to e2 passes through (1, 1) / sqrt(2)."""
        path = geodesic_section(basis_vector(1, 1), basis_vector(1, 2))
        assert np.allclose(path(0.5), np.array([1.0, 1.0]) / np.sqrt(2.0))

    def test_antipodal_rejected(self):
        with pytest.raises(SphereDomainError):
            geodesic_section(basis_vector(2, 1), -basis_vector(2, 1))


class TestOddPlanner:
    """The two-region planner on odd spheres."""

    def test_antipodal_pair_uses_region_two(self):
        """(e1, -e1) on S^1 is only in U2."""
        e1 = basis_vector(1, 1)
        plan = plan_odd(1, e1, -e1)
        assert plan.region == 2
        assert_valid_plan(plan, e1, -e1)

    def test_generic_pair_uses_region_one(self, rng):
        theta1, theta2 = random_sphere_point(rng, 3), random_sphere_point(rng, 3)
        plan = plan_odd(3, theta1, theta2)
        assert plan.region == 1
        assert_valid_plan(plan, theta1, theta2)

    def test_equal_pair(self):
        """(theta, theta) lies in U1 only and the path is constant."""
        theta = basis_vector(3, 2)
        assert region_cover(theta, theta) == [1]
        plan = plan_odd(3, theta, theta)
        assert np.array_equal(plan.path(0.5), theta)

    def test_detour_waypoints(self, rng):
        """Region 2 passes -theta2 at t = 1/2 and v(-theta2) at t = 3/4."""
        theta2 = random_sphere_point(rng, 3)
        plan = plan_odd(3, -theta2, theta2)
        assert plan.region == 2
        assert np.array_equal(plan.path(0.5), -theta2)
        assert np.array_equal(plan.path(0.75), v_field(-theta2))

    def test_wrong_parity(self):
        with pytest.raises(SphereDomainError):
            plan_odd(2, basis_vector(2, 1), basis_vector(2, 2))

    def test_region_count(self):
        assert region_count(Parity.ODD) == 2
        assert region_count(Parity.EVEN) == 3


class TestEvenPlanner:
    """The three-region planner on even spheres."""

    @pytest.mark.parametrize("sign", [1.0, -1.0])
    def test_exceptional_pairs_use_chart(self, sign):
        """(e1, -e1) and (-e1, e1) on S^2 are only in V3."""
        e1 = basis_vector(2, 1)
        theta1, theta2 = sign * e1, -sign * e1
        assert region_cover(theta1, theta2) == [3]
        plan = plan_even(2, theta1, theta2)
        assert plan.region == 3
        assert_valid_plan(plan, theta1, theta2)

    def test_antipodal_pair_uses_region_two(self):
        theta = np.array([0.0, 0.6, 0.8])
        plan = plan_even(2, theta, -theta)
        assert plan.region == 2
        assert_valid_plan(plan, theta, -theta)

    def test_detour_waypoints(self):
        """Region 2 turns through the normalized field nu at -theta2."""
        theta2 = np.array([0.6, 0.0, 0.8])
        plan = plan_even(2, -theta2, theta2)
        assert plan.region == 2
        nu = nu_field(-theta2)
        assert np.array_equal(plan.path(0.5), -theta2)
        assert np.array_equal(plan.path(0.75), nu / np.linalg.norm(nu))
        assert_valid_plan(plan, -theta2, theta2)

    def test_v2_excludes_e1_targets(self):
        """theta2 = +-e1 is outside V2."""
        e1 = basis_vector(2, 1)
        inside, margin = region_member(2, Parity.EVEN, 2, basis_vector(2, 2), e1)
        assert not inside
        assert margin == 0.0

    def test_region_index_out_of_range(self):
        with pytest.raises(SphereDomainError):
            region_member(2, Parity.EVEN, 4, basis_vector(2, 1), basis_vector(2, 2))

    def test_parity_mismatch(self):
        with pytest.raises(SphereDomainError):
            region_member(2, Parity.ODD, 1, basis_vector(2, 1), basis_vector(2, 2))


class TestPlannerProperties:
    """Covering and path validity over random pairs."""

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=2 ** 32 - 1), st.booleans())
    def test_every_pair_is_planned(self, m, seed, antipodal):
        """Every pair lies in some region and the chosen plan is valid."""
        rng = np.random.default_rng(seed)
        theta1 = random_sphere_point(rng, m)
        theta2 = -theta1 if antipodal else random_sphere_point(rng, m)
        cover = region_cover(theta1, theta2)
        assert cover
        plan = plan_sphere(theta1, theta2)
        assert plan.region == min(cover)
        assert_valid_plan(plan, theta1, theta2)
