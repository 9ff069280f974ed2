"""
Points of the unit sphere S^m in R^{m+1}, the tangent vector fields used by
the planners, and the stereographic chart from the north pole.
"""
from dataclasses import dataclass

import numpy as np

from ..config import settings
from ..exceptions import SphereDomainError

UNIT_TOL = 1e-12


@dataclass(frozen=True)
class SpherePoint:
    """A unit vector in R^{m+1}."""
    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim != 1 or coords.size < 2:
            raise SphereDomainError("A sphere point needs at least two coordinates.")
        if abs(np.linalg.norm(coords) - 1.0) > UNIT_TOL:
            raise SphereDomainError(f"Not a unit vector: norm {np.linalg.norm(coords):.17g}.")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def normalized(cls, vector) -> "SpherePoint":
        vector = np.asarray(vector, dtype=float)
        norm = np.linalg.norm(vector)
        if norm == 0.0:
            raise SphereDomainError("Cannot normalize the zero vector.")
        return cls(vector / norm)

    @property
    def m(self) -> int:
        return self.coords.size - 1

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


def as_coords(x, tol: float = 1e-9) -> np.ndarray:
    """Coordinates of a sphere point, accepting SpherePoint or any near-unit vector."""
    coords = np.asarray(x, dtype=float)
    if coords.ndim != 1 or coords.size < 2:
        raise SphereDomainError("A sphere point needs at least two coordinates.")
    if abs(np.linalg.norm(coords) - 1.0) > tol:
        raise SphereDomainError(f"Not a unit vector: norm {np.linalg.norm(coords):.17g}.")
    return coords


def basis_vector(m: int, index: int) -> np.ndarray:
    """e_index on S^m, 1-based as in e_1 = (1, 0, ..., 0)."""
    e = np.zeros(m + 1)
    e[index - 1] = 1.0
    return e


def random_sphere_point(rng: np.random.Generator, m: int) -> np.ndarray:
    while True:
        v = rng.standard_normal(m + 1)
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            return v / norm


def v_field(x) -> np.ndarray:
    """Unit tangent field (-y1, x1, ..., -y_l, x_l) on an odd sphere."""
    x = as_coords(x)
    if x.size % 2:
        raise SphereDomainError(f"v is defined on odd spheres only, got S^{x.size - 1}.")
    v = np.empty_like(x)
    v[0::2] = -x[1::2]
    v[1::2] = x[0::2]
    return v


def nu_field(x) -> np.ndarray:
    """Tangent field (0, -x3, x2, ..., -x_{m+1}, x_m) on an even sphere; zero exactly at +-e1."""
    x = as_coords(x)
    if x.size % 2 == 0:
        raise SphereDomainError(f"nu is defined on even spheres only, got S^{x.size - 1}.")
    nu = np.zeros_like(x)
    nu[1::2] = -x[2::2]
    nu[2::2] = x[1::2]
    return nu


def stereo_p(x) -> np.ndarray:
    """Stereographic projection S^m - {p_N} -> R^m from p_N = (0, ..., 0, 1)."""
    x = as_coords(x)
    if not x[-1] < 1.0 - settings.NORTH_POLE_GUARD:
        raise SphereDomainError("Stereographic projection is undefined at the north pole.")
    return x[:-1] / (1.0 - x[-1])


def stereo_q(y) -> np.ndarray:
    """Inverse stereographic projection R^m -> S^m - {p_N}; rows of a 2-D array map row by row."""
    y = np.asarray(y, dtype=float)
    r2 = np.sum(y * y, axis=-1, keepdims=True)
    return np.concatenate([2.0 * y / (r2 + 1.0), (r2 - 1.0) / (r2 + 1.0)], axis=-1)
