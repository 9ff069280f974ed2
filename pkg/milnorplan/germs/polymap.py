"""
Exact polynomial map germs and their floating-point evaluators.

Coefficients are kept as exact rationals in sympy `Poly` objects over QQ; the
symbolic partial derivatives are computed once at construction and compiled
to numpy callables with `lambdify`.
"""
from typing import Callable, List, Sequence, Tuple

import numpy as np
import structlog
import sympy as sp
from sympy.polys.polyerrors import CoercionFailed, PolynomialError

from ..exceptions import DimensionMismatchError, GermDefinitionError

logger = structlog.get_logger(__name__)


def real_symbols(n: int) -> Tuple[sp.Symbol, ...]:
    """Coordinates x1..xn of the real domain."""
    return tuple(sp.symbols(f"x1:{n + 1}", real=True))


def complex_symbols(m: int) -> Tuple[sp.Symbol, ...]:
    """Coordinates z1..zm of a complex domain."""
    return tuple(sp.symbols(f"z1:{m + 1}"))


class PolyMap:
    """
    A polynomial map R^n -> R^p with rational coefficients.

    `components` are sympy Polys over QQ in the symbols `real_symbols(n)`;
    `partials[i][j]` is the exact derivative d f_i / d x_j. Instances are
    immutable after construction.
    """
    __slots__ = ("_n", "_p", "_components", "_partials", "_values", "_jacobian")

    def __init__(self, n: int, p: int, components: Sequence[sp.Poly]):
        components = tuple(components)
        if p < 1 or n < p:
            raise GermDefinitionError(f"A polynomial map needs n >= p >= 1, got n={n}, p={p}.")
        if len(components) != p:
            raise GermDefinitionError(f"Expected {p} components, got {len(components)}.")

        variables = real_symbols(n)
        for component in components:
            if tuple(component.gens) != variables:
                raise GermDefinitionError("Components must be polynomials in x1..xn.")
            if component.coeff_monomial(1) != 0:
                raise GermDefinitionError("Germ components must vanish at the origin.")

        self._n = n
        self._p = p
        self._components = components
        self._partials = tuple(tuple(c.diff(x) for x in variables) for c in components)
        self._values = sp.lambdify([variables], [c.as_expr() for c in components], "numpy")
        self._jacobian = sp.lambdify(
            [variables], [[d.as_expr() for d in row] for row in self._partials], "numpy"
        )

    @property
    def n(self) -> int:
        return self._n

    @property
    def p(self) -> int:
        return self._p

    @property
    def components(self) -> Tuple[sp.Poly, ...]:
        return self._components

    @property
    def partials(self) -> Tuple[Tuple[sp.Poly, ...], ...]:
        return self._partials

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self._n == other._n and self._components == other._components

    def __hash__(self) -> int:
        return hash((self._n, self._components))

    def __repr__(self) -> str:
        return f"PolyMap(n={self._n}, p={self._p}, components={self.expressions()})"

    @classmethod
    def from_expressions(cls, expressions: Sequence[sp.Expr], n: int) -> "PolyMap":
        """Builds a map from sympy expressions in `real_symbols(n)`."""
        variables = real_symbols(n)
        try:
            components = tuple(sp.Poly(sp.expand(e), *variables, domain=sp.QQ) for e in expressions)
        except (PolynomialError, CoercionFailed) as e:
            raise GermDefinitionError(f"Components must be polynomials with rational coefficients: {e}") from e
        return cls(n=n, p=len(components), components=components)

    @classmethod
    def from_terms(cls, n: int, terms: Sequence[Sequence[Tuple[Sequence[int], int, int]]]) -> "PolyMap":
        """
        Builds a map from per-component term lists
        `[(exponent vector, numerator, denominator), ...]`.
        """
        variables = real_symbols(n)
        components = []
        for component_terms in terms:
            expr = sp.Integer(0)
            for exponents, numerator, denominator in component_terms:
                if len(exponents) != n:
                    raise DimensionMismatchError(n, len(exponents), what="exponent vector")
                if denominator == 0:
                    raise GermDefinitionError("Coefficient denominators must be nonzero.")
                monomial = sp.Mul(*[x ** int(k) for x, k in zip(variables, exponents)])
                expr += sp.Rational(numerator, denominator) * monomial
            components.append(expr)
        return cls.from_expressions(components, n)

    def _check(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimensionMismatchError(self.n, x.size)
        return x

    def eval(self, x: np.ndarray) -> np.ndarray:
        """Evaluates the map at `x` in floating point."""
        x = self._check(x)
        return np.array(self._values(x), dtype=float)

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        """Evaluates the map at every row of `xs`, shape (N, p)."""
        xs = np.asarray(xs, dtype=float)
        if xs.ndim != 2 or xs.shape[1] != self.n:
            raise DimensionMismatchError(self.n, xs.shape[-1] if xs.ndim else xs.size)
        values = self._values(xs.T)
        return np.column_stack([np.broadcast_to(np.asarray(v, dtype=float), (xs.shape[0],)) for v in values])

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """The p x n Jacobian matrix at `x`."""
        x = self._check(x)
        return np.array(self._jacobian(x), dtype=float).reshape(self.p, self.n)

    def value_and_jacobian(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        x = self._check(x)
        return (
            np.array(self._values(x), dtype=float),
            np.array(self._jacobian(x), dtype=float).reshape(self.p, self.n),
        )

    def expressions(self) -> List[sp.Expr]:
        return [c.as_expr() for c in self.components]


def realify(polynomial: sp.Expr, variables: Sequence[sp.Symbol]) -> PolyMap:
    """
    Realifies a complex polynomial f(z1..zm) into the map R^{2m} -> R^2
    (Re f, Im f) under z_k = x_{2k-1} + i x_{2k}.

    Raises:
        GermDefinitionError: If the polynomial has a nonzero constant term or
            non-rational coefficient parts.
    """
    m = len(variables)
    poly = sp.Poly(sp.expand(polynomial), *variables)
    if poly.coeff_monomial(1) != 0:
        raise GermDefinitionError("Cannot realify a polynomial with a nonzero constant term.")

    x = real_symbols(2 * m)
    substitution = {z: x[2 * k] + sp.I * x[2 * k + 1] for k, z in enumerate(variables)}
    expanded = sp.expand(poly.as_expr().subs(substitution))
    real_part, imag_part = (sp.expand(part) for part in expanded.as_real_imag())
    logger.debug("Realified complex polynomial", degree=poly.total_degree(), n=2 * m)
    return PolyMap.from_expressions([real_part, imag_part], 2 * m)


def complex_eval(polynomial: sp.Expr, variables: Sequence[sp.Symbol]) -> Callable[[np.ndarray], complex]:
    """Compiles a complex polynomial for evaluation at a complex vector."""
    compiled = sp.lambdify([tuple(variables)], polynomial, "numpy")
    return lambda z: complex(compiled(np.asarray(z, dtype=complex)))


def to_complex(x: np.ndarray) -> np.ndarray:
    """Identifies a point of R^{2m} with C^m (z_k = x_{2k-1} + i x_{2k})."""
    x = np.asarray(x, dtype=float)
    return x[0::2] + 1j * x[1::2]
