"""
Unit tests for the verification suites.
"""
import numpy as np
import pytest

from milnorplan.config import settings
from milnorplan.exceptions import MilnorError
from milnorplan.services import (
    verify_all,
    verify_section_cmd,
    verify_sphere,
    verify_task,
    verify_transport,
    verify_tube,
)
from milnorplan.services.harness import suite_key


class TestSphereSuite:
    """Covering, endpoints and region economy on small spheres."""

    @pytest.mark.parametrize("m, regions", [(1, [1, 2]), (2, [1, 2, 3]), (3, [1, 2])])
    def test_passes_and_uses_every_region(self, m, regions):
        report = verify_sphere(m, trials=20, seed=0, samples=32)
        assert report.passed
        assert report.regions_observed == regions
        assert report.worst_residuals["endpoint"] == 0.0
        assert report.worst_residuals["norm"] <= 1e-9

    def test_continuity_moduli_are_finite(self):
        report = verify_sphere(2, trials=30, seed=1, samples=64)
        assert report.continuity_moduli
        assert all(np.isfinite(v) for v in report.continuity_moduli.values())

    def test_reproducible(self):
        """Same seed, same report bytes."""
        first = verify_sphere(3, trials=15, seed=7, samples=16)
        second = verify_sphere(3, trials=15, seed=7, samples=16)
        assert first.model_dump_json() == second.model_dump_json()

    def test_invalid_dimension(self):
        with pytest.raises(MilnorError):
            verify_sphere(0, trials=5)


class TestGermSuites:
    """Tube, transport, section and task suites on small budgets."""

    def test_tube_suite_projection(self, projection):
        report = verify_tube(projection, trials=10, seed=0)
        assert report.passed
        assert report.worst_residuals["idempotence"] <= 1e-9
        assert report.details["min_singular_value"] == pytest.approx(1.0)

    def test_tube_suite_detects_oversized_delta(self, z2w2):
        """delta = 0.4 leaves no fiber point inside the epsilon-ball."""
        report = verify_tube(z2w2.with_radii(delta=0.4), trials=10, seed=0)
        assert not report.passed
        assert report.failures >= 1

    def test_transport_suite_projection(self, projection):
        report = verify_transport(projection, seed=0, steps=128)
        assert report.passed
        assert report.worst_residuals["return"] <= 1e-5
        assert report.details["displacement"] <= 1e-8

    def test_section_suite_counts_failures(self, z2w2):
        """Suites report numerical failures instead of raising."""
        report = verify_section_cmd(z2w2.with_radii(delta=0.4), seed=0, samples=8)
        assert not report.passed
        assert "error" in report.details

    def test_task_suite_projection(self, projection):
        report = verify_task(projection, trials=8, seed=0, samples=32)
        assert report.passed
        assert set(report.regions_observed) <= {1, 2}
        assert report.worst_residuals["adherence"] <= settings.ADHERENCE_TOL
        assert report.details["tc_value"] == 2

    def test_transport_ratio_not_applicable_when_exact(self, projection):
        """Lifts of the projection are exact at every step count."""
        report = verify_transport(projection, seed=0, steps=64)
        assert report.passed
        assert report.details["fine_error"] <= 1e-11
        assert report.details["convergence_ratio"] == "n/a"

    @pytest.mark.slow
    def test_transport_suite_complex_germ(self, z2w3):
        report = verify_transport(z2w3, seed=0, steps=256)
        assert report.passed
        ratio = report.details["convergence_ratio"]
        assert ratio == "n/a" or ratio >= 8.0

    def test_tube_suite_jacobian_agrees(self, z2w2):
        report = verify_tube(z2w2, trials=6, seed=0)
        assert report.worst_residuals["jacobian"] <= 1e-7

    def test_task_suite_defaults_to_lift_grid(self, projection):
        settings.TASK_STEPS = 64
        report = verify_task(projection, trials=4, seed=0)
        assert report.passed
        assert report.worst_residuals["adherence"] <= settings.ADHERENCE_TOL

    @pytest.mark.slow
    def test_task_suite_complex_germ(self, z2w3):
        report = verify_task(z2w3, trials=6, seed=0, samples=32)
        assert report.passed
        assert len(report.regions_observed) <= 2


class TestVerifyAll:
    def test_reports_sorted_by_suite(self, projection):
        settings.TRANSPORT_STEPS = 128
        settings.SECTION_STEPS = 64
        report = verify_all(projection, seed=0, trials=4, sphere_trials=12)
        assert [r.suite for r in report.suites] == [
            "section", "sphere", "sphere", "sphere", "task", "transport", "tube",
        ]
        assert [r.subject for r in report.suites if r.suite == "sphere"] == ["S^1", "S^2", "S^3"]
        assert report.passed
        assert all(r.passed for r in report.suites)

    def test_suite_keys_differ(self):
        assert len({suite_key(name) for name in ("sphere", "tube", "transport", "section", "task")}) == 5
