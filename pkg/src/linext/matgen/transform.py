from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import InvalidSpecError
from ..gf2 import BitMatrix


class Kind(str, Enum):
    UNIFORM = "uniform"
    SPARSE = "sparse"
    FIXED_COLUMN_WEIGHT = "fixed-column-weight"
    BCH = "bch"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class TransformMatrix:
    """An ``n x m`` extraction matrix plus the parameters that produced it.

    ``generator_poly`` (BCH only) packs the coefficient of ``x**i`` into
    bit ``i``.
    """

    matrix: BitMatrix
    kind: Kind
    density: float | None = None
    seed: int | None = None
    column_weight: int | None = None
    bch_params: tuple[int, int] | None = None
    generator_poly: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.FIXED_COLUMN_WEIGHT:
            if self.column_weight is None:
                raise InvalidSpecError("fixed-column-weight matrix needs column_weight")
            if any(w != self.column_weight for w in self.matrix.column_weights()):
                raise InvalidSpecError("column weights differ from the declared weight")
        if self.kind is Kind.BCH:
            if self.bch_params is None or self.generator_poly is None:
                raise InvalidSpecError("bch matrix needs bch_params and generator_poly")
            kappa, _ = self.bch_params
            deg = self.generator_poly.bit_length() - 1
            if self.n != (1 << kappa) - 1 or self.m != self.n - deg:
                raise InvalidSpecError("bch dimensions do not match kappa and deg(g)")

    @property
    def n(self) -> int:
        return self.matrix.rows

    @property
    def m(self) -> int:
        return self.matrix.cols

    @classmethod
    def explicit(cls, matrix: BitMatrix) -> TransformMatrix:
        """Wrap a hand-built matrix (identity, test fixtures, imports)."""
        return cls(matrix=matrix, kind=Kind.EXPLICIT)
