"""Seeded random constructions: uniform, sparse and fixed-column-weight.

Every entry is drawn row-major (entry ``(i, j)`` is draw ``i*m + j``)
from ``BitStream(seed, STREAM_MATRIX)``, so a parameter tuple always
regenerates the same matrix.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidSpecError
from ..gf2 import BitMatrix
from ..prng import STREAM_MATRIX, BitStream
from .transform import Kind, TransformMatrix


def _check_dims(n: int, m: int) -> None:
    if n < 1 or m < 1:
        raise InvalidSpecError(f"dimensions must be positive, got n={n}, m={m}")
    if m > n:
        raise InvalidSpecError(f"m={m} exceeds n={n}: extraction cannot expand")


def default_density(n: int) -> float:
    """``min(1/2, log2(n)**2 / n)``, safely inside the ``omega(log n / n)`` regime."""
    if n < 2:
        return 0.5
    return min(0.5, math.log2(n) ** 2 / n)


def gen_uniform(n: int, m: int, seed: int) -> TransformMatrix:
    _check_dims(n, m)
    bits = BitStream(seed, STREAM_MATRIX).bits(n * m).reshape(n, m)
    return TransformMatrix(BitMatrix.from_bits(bits), Kind.UNIFORM, density=0.5, seed=seed)


def gen_sparse(n: int, m: int, p: float | None, seed: int) -> TransformMatrix:
    """I.i.d. Bernoulli(p) entries; ``p=None`` picks :func:`default_density`.

    At ``p = 1/2`` this is distributed like :func:`gen_uniform` but uses a
    different derivation from the stream, so the bits differ.
    """
    _check_dims(n, m)
    if p is None:
        p = default_density(n)
    if not 0.0 < p <= 0.5:
        raise InvalidSpecError(f"density must lie in (0, 1/2], got {p}")
    bits = BitStream(seed, STREAM_MATRIX).bernoulli(n * m, p).reshape(n, m)
    return TransformMatrix(BitMatrix.from_bits(bits), Kind.SPARSE, density=p, seed=seed)


def gen_fixed_column_weight(n: int, m: int, k: int, seed: int) -> TransformMatrix:
    """Each column gets exactly ``k`` ones at distinct uniform positions."""
    _check_dims(n, m)
    if not 1 <= k <= n:
        raise InvalidSpecError(f"column weight must lie in [1, n={n}], got {k}")
    stream = BitStream(seed, STREAM_MATRIX)
    bits = np.zeros((n, m), dtype=np.uint8)
    for j in range(m):
        bits[stream.sample_without_replacement(n, k), j] = 1
    return TransformMatrix(
        BitMatrix.from_bits(bits),
        Kind.FIXED_COLUMN_WEIGHT,
        density=k / n,
        seed=seed,
        column_weight=k,
    )
