"""
Unit tests for exact polynomial maps and realification.
"""
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from milnorplan.exceptions import DimensionMismatchError, GermDefinitionError
from milnorplan.germs import (
    PolyMap,
    complex_eval,
    complex_symbols,
    germ_catalog,
    real_symbols,
    realify,
    to_complex,
)

coordinate = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)


class TestPolyMap:
    """Construction, evaluation and validation of polynomial maps."""

    def test_projection_eval_and_jacobian(self, projection):
        """The coordinate projection evaluates to its first two coordinates with constant Jacobian."""
        x = np.array([0.1, -0.2, 0.3])
        assert np.array_equal(projection.map.eval(x), np.array([0.1, -0.2]))
        assert np.array_equal(projection.map.jacobian(x), np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))

    def test_from_terms(self):
        """Term lists build the expected rational polynomials."""
        poly_map = PolyMap.from_terms(3, [[([1, 0, 0], 1, 1)], [([0, 2, 0], 1, 2), ([0, 0, 1], -3, 4)]])
        x1, x2, x3 = real_symbols(3)
        assert poly_map.expressions() == [x1, x2 ** 2 / 2 - sp.Rational(3, 4) * x3]
        assert np.allclose(poly_map.eval(np.array([1.0, 2.0, 4.0])), [1.0, -1.0])

    def test_nonzero_constant_term_rejected(self):
        """Germs must vanish at the origin."""
        x1, x2, _ = real_symbols(3)
        with pytest.raises(GermDefinitionError):
            PolyMap.from_expressions([x1 + 1, x2], 3)

    def test_non_polynomial_rejected(self):
        """Rational functions are not polynomial germs."""
        x1, x2, _ = real_symbols(3)
        with pytest.raises(GermDefinitionError):
            PolyMap.from_expressions([x1 / x2, x2], 3)

    def test_invalid_dimensions_rejected(self):
        """A map needs n >= p."""
        x1, x2 = real_symbols(2)
        with pytest.raises(GermDefinitionError):
            PolyMap.from_expressions([x1, x2, x1 * x2], 2)

    def test_eval_dimension_mismatch(self, projection):
        """Evaluating at a point of the wrong dimension raises."""
        with pytest.raises(DimensionMismatchError):
            projection.map.eval(np.zeros(4))

    def test_exponent_vector_length_checked(self):
        """Exponent vectors must have n entries."""
        with pytest.raises(DimensionMismatchError):
            PolyMap.from_terms(3, [[([1, 0], 1, 1)], [([0, 1, 0], 1, 1)]])

    def test_equality_and_hash(self):
        """Maps with equal components are equal and hash alike."""
        x1, x2, _ = real_symbols(3)
        first = PolyMap.from_expressions([x1, x2], 3)
        second = PolyMap.from_expressions([x1, x2], 3)
        assert first == second
        assert hash(first) == hash(second)

    def test_jacobian_matches_finite_differences(self, z2w3, rng):
        """Symbolic partials agree with central differences."""
        x = rng.uniform(-0.5, 0.5, size=4)
        h = 1e-6
        numeric = np.column_stack([
            (z2w3.map.eval(x + h * e) - z2w3.map.eval(x - h * e)) / (2 * h) for e in np.eye(4)
        ])
        assert np.allclose(numeric, z2w3.map.jacobian(x), atol=1e-8)

    @pytest.mark.parametrize("name", germ_catalog.names())
    def test_catalog_jacobians_match_central_differences(self, name):
        """At random points of the epsilon-ball every catalog Jacobian is within 1e-7 of central differences."""
        g = germ_catalog.get(name)
        rng = np.random.default_rng(7)
        h = 1e-6
        for _ in range(16):
            direction = rng.standard_normal(g.n)
            x = g.epsilon * rng.random() ** (1.0 / g.n) * direction / np.linalg.norm(direction)
            numeric = np.column_stack([
                (g.map.eval(x + h * e) - g.map.eval(x - h * e)) / (2 * h) for e in np.eye(g.n)
            ])
            assert np.max(np.abs(numeric - g.map.jacobian(x))) <= 1e-7

    def test_eval_many_matches_eval(self, fold, rng):
        xs = rng.uniform(-0.5, 0.5, size=(5, 4))
        assert np.allclose(fold.map.eval_many(xs), [fold.map.eval(x) for x in xs], atol=1e-15)
        assert fold.map.eval_many(xs[:0]).shape == (0, 3)

    def test_eval_many_shape_checked(self, fold):
        with pytest.raises(DimensionMismatchError):
            fold.map.eval_many(np.zeros((2, 3)))


class TestRealify:
    """Realification of complex polynomials."""

    def test_z2_plus_w2_components(self, z2w2):
        """z^2 + w^2 realifies to (x1^2 - x2^2 + x3^2 - x4^2, 2 x1 x2 + 2 x3 x4)."""
        x1, x2, x3, x4 = real_symbols(4)
        real_part, imag_part = z2w2.map.expressions()
        assert sp.expand(real_part - (x1 ** 2 - x2 ** 2 + x3 ** 2 - x4 ** 2)) == 0
        assert sp.expand(imag_part - (2 * x1 * x2 + 2 * x3 * x4)) == 0

    def test_z2_plus_w2_at_fiber_point(self, z2w2):
        """(sqrt(delta), 0, 0, 0) maps to (delta, 0)."""
        x = np.array([math.sqrt(z2w2.delta), 0.0, 0.0, 0.0])
        assert np.allclose(z2w2.map.eval(x), [z2w2.delta, 0.0], atol=1e-15)

    def test_single_variable(self):
        """Realifying z on C^1 gives the identity of R^2."""
        (z,) = complex_symbols(1)
        poly_map = realify(z, (z,))
        assert (poly_map.n, poly_map.p) == (2, 2)
        assert np.array_equal(poly_map.eval(np.array([0.3, -0.4])), np.array([0.3, -0.4]))

    def test_constant_term_rejected(self):
        """A complex polynomial with f(0) != 0 is not a germ."""
        z, w = complex_symbols(2)
        with pytest.raises(GermDefinitionError):
            realify(z * w + 1, (z, w))

    def test_complex_coefficients(self):
        """Gaussian-rational coefficients realify exactly."""
        z, w = complex_symbols(2)
        poly_map = realify((1 + 2 * sp.I) * z * w, (z, w))
        x = np.array([0.2, 0.1, -0.3, 0.5])
        value = complex((1 + 2j) * complex(0.2, 0.1) * complex(-0.3, 0.5))
        assert np.allclose(poly_map.eval(x), [value.real, value.imag], atol=1e-15)

    @hypothesis_settings(max_examples=50, deadline=None)
    @given(st.lists(coordinate, min_size=4, max_size=4))
    def test_agrees_with_complex_evaluation(self, coords):
        """The realified map is (Re f, Im f) of the complex polynomial."""
        z, w = complex_symbols(2)
        polynomial = z ** 2 + w ** 3
        poly_map = realify(polynomial, (z, w))
        x = np.array(coords)
        value = complex_eval(polynomial, (z, w))(to_complex(x))
        assert np.allclose(poly_map.eval(x), [value.real, value.imag], atol=1e-12)
