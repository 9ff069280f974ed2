import json
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import structlog
import sympy as sp
from pydantic import ValidationError

from ..config import settings
from ..exceptions import GermDefinitionError, UnknownGermError
from .arrangement import arrangement_Q, braid_arrangement
from .models import Arrangement, GermDocument, GermKind, GermSpec
from .polymap import PolyMap, complex_symbols, real_symbols, realify

logger = structlog.get_logger(__name__)


def _projection(n: int, p: int) -> PolyMap:
    x = real_symbols(n)
    return PolyMap.from_expressions(list(x[:p]), n)


def _complex(build: Callable[..., sp.Expr], m: int) -> PolyMap:
    z = complex_symbols(m)
    return realify(build(*z), z)


def _real_fold() -> PolyMap:
    x1, x2, x3, x4 = real_symbols(4)
    return PolyMap.from_expressions([x1, x2 + x4 ** 2, x3 + x1 * x4], 4)


# name -> (kind, factory)
_BUILTINS: Dict[str, Any] = {
    "projection3to2": (GermKind.TRIVIAL_PROJECTION, lambda: _projection(3, 2)),
    "projection4to3": (GermKind.TRIVIAL_PROJECTION, lambda: _projection(4, 3)),
    "complex-z2w2": (GermKind.COMPLEX_HOLOMORPHIC, lambda: _complex(lambda z, w: z ** 2 + w ** 2, 2)),
    "complex-z2w3": (GermKind.COMPLEX_HOLOMORPHIC, lambda: _complex(lambda z, w: z ** 2 + w ** 3, 2)),
    "real-fold4to3": (GermKind.REAL_ISOLATED, _real_fold),
    "arrangement-braid2": (
        GermKind.ARRANGEMENT,
        lambda: arrangement_Q(Arrangement(d=1, forms=[[1, 0], [0, 1], [1, -1]]))[1],
    ),
    "arrangement-braid3": (GermKind.ARRANGEMENT, lambda: arrangement_Q(braid_arrangement(3))[1]),
    "arrangement-single": (
        GermKind.ARRANGEMENT,
        lambda: arrangement_Q(Arrangement(d=1, forms=[[1, 0]]))[1],
    ),
}


class GermCatalog:
    """
    Resolves germs by catalog name or from JSON documents.

    Polynomial maps are built lazily and cached; tube radii are applied at
    lookup time from the current settings unless given explicitly.
    """

    def __init__(self):
        self._maps: Dict[str, PolyMap] = {}

    def names(self) -> List[str]:
        return sorted(_BUILTINS)

    def get(self, name: str, delta: Optional[float] = None, epsilon: Optional[float] = None) -> GermSpec:
        """
        Returns the catalog germ `name`.

        Raises:
            UnknownGermError: If the name is not in the catalog.
            GermDefinitionError: If the radii violate 0 < delta < epsilon.
        """
        if name not in _BUILTINS:
            raise UnknownGermError(name)
        kind, factory = _BUILTINS[name]
        if name not in self._maps:
            logger.debug("Building catalog germ", germ=name)
            self._maps[name] = factory()
        return _spec(
            name=name,
            poly_map=self._maps[name],
            kind=kind,
            delta=settings.DEFAULT_DELTA if delta is None else delta,
            epsilon=settings.DEFAULT_EPSILON if epsilon is None else epsilon,
        )

    def load_document(self, document: Union[Dict[str, Any], str, Path]) -> GermSpec:
        """
        Builds a germ from a JSON document
        {"n", "p", "components": [[[exponents], num, den], ...] per component,
         "delta", "epsilon", optional "kind" and "name"}.
        """
        if isinstance(document, (str, Path)):
            try:
                document = json.loads(Path(document).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as e:
                raise GermDefinitionError(f"Cannot read germ document: {e}") from e
        try:
            parsed = GermDocument.model_validate(document)
        except ValidationError as e:
            raise GermDefinitionError(f"Invalid germ document: {e.errors()[0]['msg']}") from e

        poly_map = PolyMap.from_terms(parsed.n, parsed.components)
        logger.info("Loaded custom germ", germ=parsed.name, n=parsed.n, p=parsed.p)
        return _spec(
            name=parsed.name,
            poly_map=poly_map,
            kind=parsed.kind,
            delta=settings.DEFAULT_DELTA if parsed.delta is None else parsed.delta,
            epsilon=settings.DEFAULT_EPSILON if parsed.epsilon is None else parsed.epsilon,
        )

    def resolve(self, name_or_path: str) -> GermSpec:
        """Catalog name first, then a path to a JSON germ document."""
        if name_or_path in _BUILTINS:
            return self.get(name_or_path)
        if Path(name_or_path).suffix == ".json":
            return self.load_document(name_or_path)
        raise UnknownGermError(name_or_path)


def _spec(name: str, poly_map: PolyMap, kind: GermKind, delta: float, epsilon: float) -> GermSpec:
    try:
        return GermSpec(name=name, map=poly_map, delta=delta, epsilon=epsilon, kind=kind)
    except ValidationError as e:
        raise GermDefinitionError(f"Invalid germ '{name}': {e.errors()[0]['msg']}") from e


# Single, reusable catalog instance
germ_catalog = GermCatalog()


def builtin_germ(name: str) -> GermSpec:
    """Catalog lookup with the configured default radii."""
    return germ_catalog.get(name)
