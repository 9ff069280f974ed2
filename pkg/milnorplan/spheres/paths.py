"""
Lazy path combinators. A path is an evaluable map [0,1] -> R^k built from
primitive segments, concatenation, reversal, constants and
reparametrization; nothing is sampled until `sample` is called. `sample_at`
evaluates a whole parameter array at once; primitives with a batch form
skip the per-point Python calls.

Every path returns its declared endpoints bitwise at t = 0 and t = 1.
"""
from abc import ABC, abstractmethod
from typing import Callable, Optional

import numpy as np

from ..config import settings
from ..exceptions import DimensionMismatchError, PathMismatchError

BatchFunc = Callable[[np.ndarray], np.ndarray]


def _frozen(x) -> np.ndarray:
    arr = np.array(x, dtype=float)
    arr.setflags(write=False)
    return arr


class Path(ABC):
    """An evaluable map [0,1] -> R^k with exact endpoints."""

    def __init__(self, start: np.ndarray, end: np.ndarray):
        self._start = _frozen(start)
        self._end = _frozen(end)

    @property
    def start(self) -> np.ndarray:
        return self._start

    @property
    def end(self) -> np.ndarray:
        return self._end

    @property
    def dim(self) -> int:
        return self._start.shape[0]

    def __call__(self, t: float) -> np.ndarray:
        if t <= 0.0:
            return self._start
        if t >= 1.0:
            return self._end
        return self._interior(float(t))

    @abstractmethod
    def _interior(self, t: float) -> np.ndarray:
        """Value at 0 < t < 1."""

    def _interior_batch(self, ts: np.ndarray) -> np.ndarray:
        """Values at an array of parameters in (0, 1), shape (len(ts), k)."""
        return np.array([self._interior(float(t)) for t in ts], dtype=float).reshape(ts.size, self.dim)

    def sample_at(self, ts) -> np.ndarray:
        """Values at the parameters `ts`, shape (len(ts), k); endpoints stay exact."""
        ts = np.asarray(ts, dtype=float).ravel()
        out = np.empty((ts.size, self.dim))
        low, high = ts <= 0.0, ts >= 1.0
        out[low] = self._start
        out[high] = self._end
        inside = ~(low | high)
        if inside.any():
            out[inside] = self._interior_batch(ts[inside])
        return out

    def sample(self, count: int) -> np.ndarray:
        """Values at `count` equally spaced parameters, shape (count, k)."""
        return self.sample_at(np.linspace(0.0, 1.0, count))

    def derivative(self, t: float, h: Optional[float] = None) -> np.ndarray:
        """Central difference, one-sided at the ends of [0,1]."""
        h = settings.DIFF_STEP if h is None else h
        lo, hi = max(0.0, t - h), min(1.0, t + h)
        return (self(hi) - self(lo)) / (hi - lo)

    def derivative_at(self, ts, h: Optional[float] = None) -> np.ndarray:
        """`derivative` at every parameter of `ts`, shape (len(ts), k)."""
        h = settings.DIFF_STEP if h is None else h
        ts = np.asarray(ts, dtype=float).ravel()
        lo, hi = np.maximum(0.0, ts - h), np.minimum(1.0, ts + h)
        return (self.sample_at(hi) - self.sample_at(lo)) / (hi - lo)[:, None]


class Segment(Path):
    """
    A primitive path given by a function on (0,1) and its two endpoints.
    `batch`, when given, maps an array of parameters to the stacked values.
    """

    def __init__(
        self,
        func: Callable[[float], np.ndarray],
        start: np.ndarray,
        end: np.ndarray,
        batch: Optional[BatchFunc] = None,
    ):
        super().__init__(start, end)
        self._func = func
        self._batch = batch

    def _interior(self, t: float) -> np.ndarray:
        return np.asarray(self._func(t), dtype=float)

    def _interior_batch(self, ts: np.ndarray) -> np.ndarray:
        if self._batch is None:
            return super()._interior_batch(ts)
        return np.asarray(self._batch(ts), dtype=float).reshape(ts.size, self.dim)


class Constant(Path):
    def __init__(self, x: np.ndarray):
        super().__init__(x, x)

    def _interior(self, t: float) -> np.ndarray:
        return self._start

    def _interior_batch(self, ts: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self._start, (ts.size, self.dim))


class Concat(Path):
    """a(2t) on [0, 1/2], b(2t - 1) on (1/2, 1]; the junction takes a's value."""

    def __init__(self, a: Path, b: Path, tolerance: Optional[float] = None):
        tolerance = settings.ENDPOINT_TOL if tolerance is None else tolerance
        gap = float(np.linalg.norm(a.end - b.start))
        if not gap <= tolerance:
            raise PathMismatchError(gap)
        super().__init__(a.start, b.end)
        self.first = a
        self.second = b

    def _interior(self, t: float) -> np.ndarray:
        if t <= 0.5:
            return self.first(2.0 * t)
        return self.second(2.0 * t - 1.0)

    def _interior_batch(self, ts: np.ndarray) -> np.ndarray:
        out = np.empty((ts.size, self.dim))
        head = ts <= 0.5
        out[head] = self.first.sample_at(2.0 * ts[head])
        out[~head] = self.second.sample_at(2.0 * ts[~head] - 1.0)
        return out


class Reverse(Path):
    def __init__(self, a: Path):
        super().__init__(a.end, a.start)
        self.inner = a

    def _interior(self, t: float) -> np.ndarray:
        return self.inner(1.0 - t)

    def _interior_batch(self, ts: np.ndarray) -> np.ndarray:
        return self.inner.sample_at(1.0 - ts)


class Reparametrized(Path):
    """a(phi(t)) for a monotone phi with phi(0) = 0 and phi(1) = 1."""

    def __init__(self, a: Path, phi: Callable[[float], float]):
        super().__init__(a.start, a.end)
        self.inner = a
        self._phi = phi

    def _interior(self, t: float) -> np.ndarray:
        return self.inner(min(1.0, max(0.0, self._phi(t))))

    def _interior_batch(self, ts: np.ndarray) -> np.ndarray:
        return self.inner.sample_at(np.clip([self._phi(float(t)) for t in ts], 0.0, 1.0))


class Mapped(Path):
    """
    g(a(t)) for a pointwise map g. `batch` applies g to stacked rows; without
    it g is applied row by row.
    """

    def __init__(
        self,
        a: Path,
        g: Callable[[np.ndarray], np.ndarray],
        batch: Optional[BatchFunc] = None,
    ):
        super().__init__(g(a.start), g(a.end))
        self.inner = a
        self._g = g
        self._batch = batch

    def _interior(self, t: float) -> np.ndarray:
        return np.asarray(self._g(self.inner(t)), dtype=float)

    def _interior_batch(self, ts: np.ndarray) -> np.ndarray:
        rows = self.inner.sample_at(ts)
        if self._batch is None:
            return np.array([self._g(row) for row in rows], dtype=float).reshape(ts.size, self.dim)
        return np.asarray(self._batch(rows), dtype=float)


def concat(a: Path, b: Path, tolerance: Optional[float] = None) -> Path:
    return Concat(a, b, tolerance)


def reverse(a: Path) -> Path:
    return Reverse(a)


def reparametrize(a: Path, phi: Callable[[float], float]) -> Path:
    return Reparametrized(a, phi)


def constant(x: np.ndarray, k: Optional[int] = None) -> Path:
    """The constant path at x; `k` only checks the ambient dimension."""
    x = np.asarray(x, dtype=float)
    if k is not None and x.shape != (k,):
        raise DimensionMismatchError(k, x.size)
    return Constant(x)


def scaled(a: Path, factor: float) -> Path:
    return Mapped(a, lambda x: factor * np.asarray(x), batch=lambda rows: factor * rows)
