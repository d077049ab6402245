"""Ground truth by full enumeration of the source.

Deliberately shares nothing with the Fourier path: every input (or seed
``Z``) is listed with its probability, ``X`` is formed explicitly, and
``Y = X M`` is computed by integer matrix product mod 2.
"""

from __future__ import annotations

import numpy as np

from ..errors import CapacityError
from ..gf2 import BitMatrix
from ..matgen import TransformMatrix
from ..sources import (
    Markov1,
    ObliviousBitFixing,
    SourceSpec,
    independent_biases,
    seed_source,
)
from .distribution import Distribution, rho

ORACLE_MAX_BITS = 20


def all_bit_vectors(k: int) -> np.ndarray:
    """``(2**k, k)`` array; row ``z`` holds the bits of ``z``, LSB first."""
    z = np.arange(1 << k, dtype=np.int64)
    return ((z[:, None] >> np.arange(k)) & 1).astype(np.uint8)


def _guard(what: str, k: int) -> None:
    if k > ORACLE_MAX_BITS:
        raise CapacityError(what, k, ORACLE_MAX_BITS)


def _product_weights(x: np.ndarray, p: np.ndarray) -> np.ndarray:
    w = np.ones(x.shape[0])
    for i in range(x.shape[1]):
        w *= np.where(x[:, i] == 1, p[i], 1.0 - p[i])
    return w


def _markov_weights(x: np.ndarray, spec: Markov1) -> np.ndarray:
    w = np.where(x[:, 0] == 1, spec.initial, 1.0 - spec.initial)
    for i in range(1, x.shape[1]):
        q = np.where(x[:, i - 1] == 1, spec.p1_given1, spec.p1_given0)
        w = w * np.where(x[:, i] == 1, q, 1.0 - q)
    return w


def _gf2_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return ((a.astype(np.int64) @ b.astype(np.int64)) & 1).astype(np.uint8)


def enumerate_source(spec: SourceSpec) -> tuple[np.ndarray, np.ndarray]:
    """Every possible ``X`` (rows, possibly repeated) and its probability."""
    if isinstance(spec, ObliviousBitFixing):
        _guard("k", spec.k)
        values = spec.fixed_values.to_bits()
        if spec.k == 0:
            return values[None, :], np.ones(1)
        z = all_bit_vectors(spec.k)
        x = _gf2_product(z, spec.embedding().to_bits()) ^ values
        return x, np.full(len(z), 2.0**-spec.k)
    p = independent_biases(spec)
    if p is not None:
        _guard("n", len(p))
        x = all_bit_vectors(len(p))
        return x, _product_weights(x, p)
    if isinstance(spec, Markov1):
        _guard("n", spec.n)
        x = all_bit_vectors(spec.n)
        return x, _markov_weights(x, spec)
    inner, A = seed_source(spec)
    _guard("k", A.rows)
    z, w = enumerate_source(inner)
    return _gf2_product(z, A.to_bits()), w


def brute_distribution(T: TransformMatrix | BitMatrix, spec: SourceSpec) -> Distribution:
    M = T.matrix if isinstance(T, TransformMatrix) else T
    x, w = enumerate_source(spec)
    y_bits = _gf2_product(x, M.to_bits())
    y = (y_bits.astype(np.int64) << np.arange(M.cols)).sum(axis=1)
    probs = np.bincount(y, weights=w, minlength=1 << M.cols)
    return Distribution(M.cols, probs)


def rho_bruteforce(T: TransformMatrix | BitMatrix, spec: SourceSpec) -> float:
    return rho(brute_distribution(T, spec))

