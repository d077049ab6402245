from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..gf2 import column_span, pack_bits, popcount_words
from ..prng import STREAM_MONTE_CARLO, BitStream
from .transform import TransformMatrix

DEFAULT_EXACT_LIMIT = 24
DEFAULT_SAMPLES = 100_000
WDIST_COLUMNS = ("weight", "count", "binomial_reference", "relative_deviation")


@dataclass(frozen=True)
class WeightDistribution:
    """Counts ``b_i`` of inputs ``u`` whose image ``M u^T`` has weight ``i``.

    In exact mode ``u = 0`` is included, so the counts sum to ``2**m``.
    Sampled mode draws ``u != 0`` uniformly and the counts sum to
    ``sample_count``.
    """

    counts: np.ndarray
    n: int
    m: int
    mode: str
    sample_count: int | None = None

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def binomial_reference(self) -> np.ndarray:
        """``total * C(n, i) / 2**n`` for each weight, in log space to avoid overflow."""
        i = np.arange(self.n + 1)
        logc = np.array([math.lgamma(self.n + 1) - math.lgamma(k + 1) - math.lgamma(self.n - k + 1) for k in i])
        return np.exp(logc + math.log(self.total) - self.n * math.log(2.0))

    def relative_deviation(self) -> np.ndarray:
        ref = self.binomial_reference()
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(ref > 0, (self.counts - ref) / ref, np.nan)

    def max_abs_deviation(self) -> float:
        """``max_i |b_i/total - C(n,i)/2**n|``, ignoring the ``u = 0`` cell."""
        ref = self.binomial_reference() / self.total
        diff = np.abs(self.counts / self.total - ref)
        return float(diff[1:].max()) if self.n else 0.0

    def min_nonzero_weight(self) -> int | None:
        nz = np.flatnonzero(self.counts[1:])
        return int(nz[0]) + 1 if nz.size else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(WDIST_COLUMNS)
        ref = self.binomial_reference()
        dev = self.relative_deviation()
        for i in range(self.n + 1):
            w.writerow([i, int(self.counts[i]), repr(float(ref[i])), "" if np.isnan(dev[i]) else repr(float(dev[i]))])
        return buf.getvalue()

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())


def weight_distribution(
    T: TransformMatrix,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> WeightDistribution:
    n, m = T.n, T.m
    counts = np.zeros(n + 1, dtype=np.int64)
    if m <= exact_limit:
        for _, images in column_span(T.matrix):
            counts += np.bincount(popcount_words(images), minlength=n + 1)
        return WeightDistribution(counts, n, m, "exact")

    stream = BitStream(seed, STREAM_MONTE_CARLO)
    mt = T.matrix.to_bits().T.astype(np.int64)
    drawn = 0
    while drawn < samples:
        batch = min(4096, samples - drawn)
        u = stream.bits(batch * m).reshape(batch, m)
        u = u[u.any(axis=1)]
        images = (u.astype(np.int64) @ mt) & 1
        counts += np.bincount(popcount_words(pack_bits(images.astype(np.uint8))), minlength=n + 1)
        drawn += u.shape[0]
    return WeightDistribution(counts, n, m, "sampled", sample_count=drawn)
