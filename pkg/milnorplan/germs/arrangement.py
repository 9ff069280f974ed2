"""
Defining polynomials of central hyperplane arrangements and the usual
families of arrangements.
"""
from itertools import combinations
from typing import List, Tuple

import structlog
import sympy as sp

from ..exceptions import GermDefinitionError
from .models import Arrangement
from .polymap import PolyMap, complex_symbols, realify

logger = structlog.get_logger(__name__)


def linear_form(arr: Arrangement, index: int) -> sp.Expr:
    """The linear form L_H of the `index`-th hyperplane."""
    z = complex_symbols(arr.d + 1)
    return sp.Add(*[c * zk for c, zk in zip(arr.forms[index], z)])


def arrangement_Q(arr: Arrangement) -> Tuple[sp.Expr, PolyMap]:
    """
    Returns the defining polynomial Q = prod L_H of a central arrangement and
    its realification R^{2(d+1)} -> R^2.

    Q is homogeneous of degree |A|.
    """
    z = complex_symbols(arr.d + 1)
    q = sp.expand(sp.Mul(*[linear_form(arr, i) for i in range(len(arr))]))
    poly = sp.Poly(q, *z)
    if not poly.is_homogeneous or poly.total_degree() != len(arr):
        raise GermDefinitionError("Defining polynomial is not homogeneous of degree |A|.")
    logger.debug("Built arrangement polynomial", hyperplanes=len(arr), d=arr.d)
    return q, realify(q, z)


def braid_arrangement(k: int) -> Arrangement:
    """Hyperplanes z_i - z_j = 0, 1 <= i < j <= k, in C^k."""
    if k < 2:
        raise GermDefinitionError("The braid arrangement needs k >= 2.")
    forms: List[List[int]] = []
    for i, j in combinations(range(k), 2):
        form = [0] * k
        form[i], form[j] = 1, -1
        forms.append(form)
    return Arrangement(d=k - 1, forms=forms)


def coordinate_arrangement(k: int) -> Arrangement:
    """Coordinate hyperplanes z_i = 0 in C^k."""
    if k < 1:
        raise GermDefinitionError("The coordinate arrangement needs k >= 1.")
    return Arrangement(d=k - 1, forms=[[1 if i == j else 0 for j in range(k)] for i in range(k)])


def generic_arrangement(k: int, count: int) -> Arrangement:
    """`count` hyperplanes z_1 + j z_2 + j^2 z_3 + ... in C^k (Vandermonde rows)."""
    if k < 2 or count < 1:
        raise GermDefinitionError("A generic arrangement needs k >= 2 and at least one form.")
    return Arrangement(d=k - 1, forms=[[j ** e for e in range(k)] for j in range(1, count + 1)])
