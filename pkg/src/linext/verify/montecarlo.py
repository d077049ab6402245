"""Monte Carlo estimate of rho(Y) for sources too large to enumerate.

The point estimate is the plug-in total-variation distance of the
empirical histogram.  It is biased upward: with ``N`` samples and all
cells near ``2^-m`` its expectation is roughly
``sqrt(2^m / (2 pi N))`` even when the output is exactly uniform.

Percentile and basic bootstrap intervals for TV both undercover badly
when the true distance is near zero, where the estimator is not smooth.
The interval here instead uses ``|TV(p_hat) - TV(p)| <= TV(p_hat, p)``:
the bootstrap supplies the ``confidence`` quantile ``q`` of
``TV(p_star, p_hat)`` as a stand-in for that of ``TV(p_hat, p)``, and
the interval is ``estimate +- q`` clipped to ``[0, 1 - 2^-m]``.  It is
conservative away from zero and keeps its coverage near zero.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import CapacityError
from ..extract import extract_blocks
from ..gf2 import BitMatrix
from ..matgen import TransformMatrix
from ..prng import STREAM_MONTE_CARLO, BitStream
from ..sources import SourceSpec, sample_many

MC_MAX_M = 20
SHARD = 1 << 16


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    ci_low: float
    ci_high: float
    samples: int
    resamples: int
    confidence: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _tv(counts: np.ndarray, total: int, m: int) -> float:
    return 0.5 * float(np.abs(counts / total - 2.0**-m).sum())


def output_histogram(T: TransformMatrix | BitMatrix, spec: SourceSpec, N: int, seed: int) -> np.ndarray:
    """Counts of each ``y`` over ``N`` draws, sampled in shards with derived seeds."""
    T = T if isinstance(T, TransformMatrix) else TransformMatrix.explicit(T)
    m = T.m
    shard_seeds = BitStream(seed, STREAM_MONTE_CARLO).words((N + SHARD - 1) // SHARD)
    counts = np.zeros(1 << m, dtype=np.int64)
    weights = np.int64(1) << np.arange(m, dtype=np.int64)
    done = 0
    for s in shard_seeds:
        size = min(SHARD, N - done)
        y = extract_blocks(T, sample_many(spec, size, int(s)))
        counts += np.bincount(y.astype(np.int64) @ weights, minlength=1 << m)
        done += size
    return counts


def mc_rho(
    T: TransformMatrix | BitMatrix,
    spec: SourceSpec,
    N: int,
    seed: int,
    resamples: int = 200,
    confidence: float = 0.95,
) -> MCEstimate:
    m = T.m if isinstance(T, TransformMatrix) else T.cols
    if m > MC_MAX_M:
        raise CapacityError("m", m, MC_MAX_M)
    if N < 100 * (1 << m):
        warnings.warn(f"N={N} < 100 * 2^m = {100 << m}; the plug-in estimate will be dominated by its bias", stacklevel=2)
    counts = output_histogram(T, spec, N, seed)
    est = _tv(counts, N, m)

    # multinomial needs a Generator; reproducible per install, not across numpy versions
    rng = np.random.Generator(np.random.Philox(key=seed | (STREAM_MONTE_CARLO << 64) | (1 << 127)))
    p_hat = counts / N
    dev = np.array([0.5 * np.abs(rng.multinomial(N, p_hat) / N - p_hat).sum() for _ in range(resamples)])
    q = float(np.quantile(dev, confidence))
    top = 1.0 - 2.0**-m
    lo = float(np.clip(est - q, 0.0, top))
    hi = float(np.clip(est + q, 0.0, top))
    return MCEstimate(est, lo, hi, N, resamples, confidence)
