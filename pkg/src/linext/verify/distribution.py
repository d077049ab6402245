from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SUM_TOL = 1e-9
CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class Distribution:
    """Exact probability vector over ``{0,1}^m``, indexed by ``y`` as an integer.

    Bit ``j`` of the index is output bit ``y_j``.  Entries down to
    ``-1e-12`` (floating-point residue of the transform) are clamped to
    zero; anything more negative, or a total off by more than ``1e-9``,
    is rejected.
    """

    m: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=np.float64).reshape(-1)
        if p.size != 1 << self.m:
            raise ValueError(f"expected {1 << self.m} probabilities, got {p.size}")
        if p.min() < -CLAMP_TOL:
            raise ValueError(f"probability {p.min()} below clamping tolerance")
        p[p < 0] = 0.0
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def uniform(cls, m: int) -> Distribution:
        return cls(m, np.full(1 << m, 2.0**-m))

    @classmethod
    def point_mass(cls, m: int, y: int = 0) -> Distribution:
        p = np.zeros(1 << m)
        p[y] = 1.0
        return cls(m, p)


def rho(dist: Distribution) -> float:
    """Statistical distance to uniform: ``1/2 sum_y |P[y] - 2^-m|``."""
    return 0.5 * float(np.abs(dist.probs - 2.0**-dist.m).sum())


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform, ``out[u] = sum_y v[y] (-1)^(y.u)``.

    Applying it twice multiplies by ``len(values)``.
    """
    a = np.array(values, dtype=np.float64).reshape(-1)
    size = a.size
    if size & (size - 1):
        raise ValueError(f"length must be a power of two, got {size}")
    h = 1
    while h < size:
        v = a.reshape(-1, 2, h)
        lo = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = lo - v[:, 1, :]
        h *= 2
    return a


def log2_sum(log_terms: np.ndarray) -> float:
    """``log2(sum 2**t)`` without leaving the log domain."""
    log_terms = np.asarray(log_terms, dtype=np.float64)
    if log_terms.size == 0:
        return -math.inf
    top = float(log_terms.max())
    if top == -math.inf:
        return -math.inf
    return top + math.log2(float(np.exp2(log_terms - top).sum()))
