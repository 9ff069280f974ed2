import numpy as np
import pytest

from milnorplan.config import settings
from milnorplan.fibration import sample_fiber
from milnorplan.germs import builtin_germ

# Settings touched by tests; restored after every test
_RESTORED = (
    "DEFAULT_DELTA",
    "DEFAULT_EPSILON",
    "TUBE_TOL",
    "TRANSPORT_STEPS",
    "SECTION_STEPS",
    "TASK_STEPS",
    "SEED",
)


@pytest.fixture(autouse=True)
def restore_settings():
    """Keeps runtime overrides (e.g. from --config) from leaking between tests."""
    saved = {name: getattr(settings, name) for name in _RESTORED}
    yield
    for name, value in saved.items():
        setattr(settings, name, value)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def projection():
    """f(x) = (x1, x2) on R^3."""
    return builtin_germ("projection3to2")


@pytest.fixture
def projection4to3():
    """f(x) = (x1, x2, x3) on R^4."""
    return builtin_germ("projection4to3")


@pytest.fixture
def z2w2():
    """Realified z^2 + w^2 on C^2."""
    return builtin_germ("complex-z2w2")


@pytest.fixture
def z2w3():
    """Realified z^2 + w^3 on C^2."""
    return builtin_germ("complex-z2w3")


@pytest.fixture
def braid2():
    """Realified z1 z2 (z1 - z2) on C^2."""
    return builtin_germ("arrangement-braid2")


@pytest.fixture
def fold():
    """f(x) = (x1, x2 + x4^2, x3 + x1 x4) on R^4."""
    return builtin_germ("real-fold4to3")


@pytest.fixture
def base_point():
    """The base point (delta, 0, ..., 0) of a germ."""
    def _base_point(g):
        b = np.zeros(g.p)
        b[0] = g.delta
        return b
    return _base_point


@pytest.fixture
def fiber_point(base_point):
    """A seeded point of the fiber over (delta, 0, ..., 0)."""
    def _fiber_point(g, seed=0):
        return sample_fiber(g, base_point(g), 1, seed)[0]
    return _fiber_point
