from enum import Enum
from typing import List, Optional, Tuple, Union

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..exceptions import GermDefinitionError
from .polymap import PolyMap


class GermKind(str, Enum):
    """Provenance of a germ; decides which branch of the TC theorem applies."""
    COMPLEX_HOLOMORPHIC = "complex-holomorphic"
    REAL_ISOLATED = "real-isolated-singularity"
    ARRANGEMENT = "arrangement"
    TRIVIAL_PROJECTION = "trivial-projection"


class GermSpec(BaseModel):
    """A polynomial map germ together with its Milnor tube radii."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str = Field(..., description="Catalog name or a label for custom germs.")
    map: PolyMap = Field(..., description="The polynomial map germ f.")
    delta: float = Field(..., gt=0, description="Radius of the target sphere S^{p-1}_delta.")
    epsilon: float = Field(..., gt=0, description="Radius of the ball D^n_epsilon.")
    kind: GermKind

    @model_validator(mode="after")
    def _check_invariants(self) -> "GermSpec":
        if not self.delta < self.epsilon:
            raise GermDefinitionError(f"Tube radii need 0 < delta < epsilon, got {self.delta}, {self.epsilon}.")
        if not self.map.n > self.map.p >= 2:
            raise GermDefinitionError(f"A Milnor germ needs n > p >= 2, got n={self.map.n}, p={self.map.p}.")
        if self.kind in (GermKind.COMPLEX_HOLOMORPHIC, GermKind.ARRANGEMENT):
            if self.map.p != 2 or self.map.n % 2:
                raise GermDefinitionError(f"A {self.kind.value} germ must be a realified map R^2m -> R^2.")
        return self

    @property
    def n(self) -> int:
        return self.map.n

    @property
    def p(self) -> int:
        return self.map.p

    def with_radii(self, delta: Optional[float] = None, epsilon: Optional[float] = None) -> "GermSpec":
        """Returns a copy with replaced radii, re-validated."""
        return GermSpec(
            name=self.name,
            map=self.map,
            delta=self.delta if delta is None else delta,
            epsilon=self.epsilon if epsilon is None else epsilon,
            kind=self.kind,
        )


Coefficient = Union[int, str, Tuple[int, int]]


def _exact(value: Coefficient) -> sp.Expr:
    """Parses an exact complex-rational coefficient: int, 'p/q', 'a+b*I' or (num, den)."""
    if isinstance(value, (tuple, list)):
        parsed = sp.Rational(value[0], value[1])
    elif isinstance(value, float):
        raise GermDefinitionError("Arrangement coefficients must be exact, not floats.")
    else:
        parsed = sp.nsimplify(sp.sympify(value), rational=True)
    re_part, im_part = parsed.as_real_imag()
    if not (re_part.is_Rational and im_part.is_Rational):
        raise GermDefinitionError(f"Coefficient {value!r} is not a complex rational.")
    return re_part + sp.I * im_part


class Arrangement(BaseModel):
    """A central arrangement of hyperplanes in C^{d+1}, one linear form per hyperplane."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    d: int = Field(..., ge=0)
    forms: List[Tuple[sp.Expr, ...]] = Field(..., min_length=1)

    @field_validator("forms", mode="before")
    @classmethod
    def _parse_forms(cls, forms):
        return [tuple(_exact(c) for c in form) for form in forms]

    @model_validator(mode="after")
    def _check_forms(self) -> "Arrangement":
        for form in self.forms:
            if len(form) != self.d + 1:
                raise GermDefinitionError(f"Linear forms on C^{self.d + 1} need {self.d + 1} coefficients.")
            if all(c == 0 for c in form):
                raise GermDefinitionError("Linear forms of an arrangement must be nonzero.")
        for i, first in enumerate(self.forms):
            for second in self.forms[i + 1:]:
                if sp.Matrix([first, second]).rank() < 2:
                    raise GermDefinitionError(f"Forms {first} and {second} are proportional.")
        return self

    def __len__(self) -> int:
        return len(self.forms)


class GermDocument(BaseModel):
    """JSON document describing a custom germ."""
    name: str = "custom"
    n: int = Field(..., ge=2)
    p: int = Field(..., ge=2)
    components: List[List[Tuple[List[int], int, int]]]
    delta: Optional[float] = None
    epsilon: Optional[float] = None
    kind: GermKind = GermKind.REAL_ISOLATED

    @model_validator(mode="after")
    def _check_shape(self) -> "GermDocument":
        if len(self.components) != self.p:
            raise GermDefinitionError(f"Document declares p={self.p} but lists {len(self.components)} components.")
        return self
