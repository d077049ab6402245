"""Exact output distributions through the Fourier domain.

For an independent input with signed biases ``s_i = 1 - 2 p_i`` the
Fourier coefficient of ``Y = X M`` at ``u`` is
``F(u) = E[(-1)^(Y.u)] = prod_{i : (M u^T)_i = 1} s_i``; one inverse
Walsh-Hadamard transform then gives ``P[Y = y]``.  The images
``M u^T`` come from :func:`linext.gf2.column_span`, and each product is
assembled from 256-entry per-byte lookup tables.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import CapacityError, DimensionError, InvalidSpecError, UnsupportedModelError
from ..gf2 import BitMatrix, column_span, matmul, rank
from ..matgen import TransformMatrix
from ..sources import (
    Independent,
    LinearSubspace,
    NonObliviousBitFixing,
    ObliviousBitFixing,
    SourceSpec,
    independent_biases,
    seed_source,
)
from .distribution import Distribution, fwht, log2_sum

EXACT_MAX_M = 26


def _as_matrix(T: TransformMatrix | BitMatrix) -> BitMatrix:
    return T.matrix if isinstance(T, TransformMatrix) else T


def _byte_tables(values: np.ndarray, neutral: float, combine) -> list[np.ndarray]:
    tables = []
    padded = np.concatenate([values, np.full((-len(values)) % 8, neutral)])
    for b in range(len(padded) // 8):
        t = np.array([neutral])
        for k in range(8):
            t = np.concatenate([t, combine(t, padded[8 * b + k])])
        tables.append(t)
    return tables


def _check(M: BitMatrix, biases: np.ndarray) -> None:
    if len(biases) != M.rows:
        raise DimensionError(f"bias vector length mismatch: expected {M.rows}, got {len(biases)}")
    if M.cols > EXACT_MAX_M:
        raise CapacityError("m", M.cols, EXACT_MAX_M)


def _walk(M: BitMatrix, tables: list[np.ndarray], out: np.ndarray, reduce) -> None:
    for start, images in column_span(M):
        raw = images.view(np.uint8)
        acc = tables[0][raw[:, 0]]
        for b in range(1, len(tables)):
            acc = reduce(acc, tables[b][raw[:, b]])
        out[start : start + len(acc)] = acc


def fourier_coefficients(T: TransformMatrix | BitMatrix, biases) -> np.ndarray:
    """``F(u)`` for every ``u`` in ``{0,1}^m`` (index bit ``j`` selects column ``j``)."""
    M = _as_matrix(T)
    p = np.asarray(biases, dtype=np.float64)
    _check(M, p)
    s = 1.0 - 2.0 * p
    out = np.empty(1 << M.cols)
    _walk(M, _byte_tables(s, 1.0, lambda t, v: t * v), out, np.multiply)
    return out


def fourier_log2_magnitudes(T: TransformMatrix | BitMatrix, biases) -> np.ndarray:
    """``log2 |F(u)|`` with ``-inf`` where a factor vanishes; never underflows."""
    M = _as_matrix(T)
    p = np.asarray(biases, dtype=np.float64)
    _check(M, p)
    with np.errstate(divide="ignore"):
        ls = np.log2(np.abs(1.0 - 2.0 * p))
    out = np.empty(1 << M.cols)
    _walk(M, _byte_tables(ls, 0.0, lambda t, v: t + v), out, np.add)
    return out


def exact_distribution_independent(T: TransformMatrix | BitMatrix, biases) -> Distribution:
    M = _as_matrix(T)
    F = fourier_coefficients(M, biases)
    return Distribution(M.cols, fwht(F) * 2.0**-M.cols)


def _reduce_to_independent(T: TransformMatrix | BitMatrix, spec: SourceSpec) -> tuple[BitMatrix, np.ndarray]:
    """Rewrite ``Y = X M`` as ``Y = Z B`` with ``Z`` a product source."""
    M = _as_matrix(T)
    p = independent_biases(spec)
    if p is not None:
        return M, p
    pair = seed_source(spec)
    if pair is not None:
        inner, A = pair
        if isinstance(inner, Independent):
            if A.cols != M.rows:
                raise DimensionError(f"source length {A.cols} != matrix rows {M.rows}")
            return matmul(A, M), np.array(inner.biases)
    raise UnsupportedModelError(f"no exact Fourier path for {type(spec).__name__}")


def exact_distribution(T: TransformMatrix | BitMatrix, spec: SourceSpec) -> Distribution:
    """Exact ``P[Y = y]`` for any source that reduces to independent bits."""
    B, p = _reduce_to_independent(T, spec)
    return exact_distribution_independent(B, p)


def fourier_bound_log2(T: TransformMatrix | BitMatrix, biases) -> float:
    """``log2 sum_{u != 0} |F(u)| / 2``."""
    logs = fourier_log2_magnitudes(T, biases)
    return log2_sum(logs[1:]) - 1.0


def fourier_bound(T: TransformMatrix | BitMatrix, biases) -> float:
    """``sum_{u != 0} |P[X M u^T = 1] - 1/2|``, an upper bound on rho(Y)."""
    return 2.0 ** fourier_bound_log2(T, biases)


def fourier_bound_for(T: TransformMatrix | BitMatrix, spec: SourceSpec) -> float:
    B, p = _reduce_to_independent(T, spec)
    return fourier_bound(B, p)


def bitfixing_rho(A: BitMatrix, T: TransformMatrix | BitMatrix) -> float:
    """``1 - 2^(r - m)`` with ``r = rank(A M)``, for ``X = Z A``, ``Z`` uniform.

    ``Y = Z (A M)`` is uniform on an ``r``-dimensional subspace, which is
    exactly this far from uniform on ``{0,1}^m``.
    """
    M = _as_matrix(T)
    if A.cols != M.rows:
        raise DimensionError(f"A has {A.cols} columns but M has {M.rows} rows")
    if rank(A) != A.rows:
        raise InvalidSpecError("A must have full row rank")
    r = rank(matmul(A, M))
    return -math.expm1((r - M.cols) * math.log(2.0))


def bitfixing_rho_for(T: TransformMatrix | BitMatrix, spec: SourceSpec) -> float:
    """:func:`bitfixing_rho` for any source that is uniform on an affine subspace."""
    M = _as_matrix(T)
    if isinstance(spec, ObliviousBitFixing):
        if spec.k == 0:
            return -math.expm1(-M.cols * math.log(2.0))
        # the fixed part only shifts the output
        return bitfixing_rho(spec.embedding(), M)
    if isinstance(spec, NonObliviousBitFixing):
        return bitfixing_rho(spec.A, M)
    if isinstance(spec, LinearSubspace) and isinstance(spec.inner, Independent):
        if all(p == 0.5 for p in spec.inner.biases):
            return bitfixing_rho(spec.A, M)
    raise UnsupportedModelError(f"rank formula needs a uniform seed; got {type(spec).__name__}")
