"""GF(2) linear-transformation randomness extractors.

Subpackages: :mod:`linext.matgen` builds matrices, :mod:`linext.sources`
models inputs, :mod:`linext.extract` applies matrices to bits, and
:mod:`linext.verify` computes or bounds the distance of the output from
uniform.
"""

from .errors import CapacityError, DimensionError, FormatError, InvalidSpecError, LinextError, UnsupportedModelError
from .gf2 import BitMatrix, BitVec, matmul, matvec, rank

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "BitVec",
    "CapacityError",
    "DimensionError",
    "FormatError",
    "InvalidSpecError",
    "LinextError",
    "UnsupportedModelError",
    "__version__",
    "matmul",
    "matvec",
    "rank",
]
