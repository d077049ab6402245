"""Versioned, counter-based bit stream used for every seeded draw.

Version 1 is Philox4x64-10 (Salmon et al., SC'11) with the 128-bit key
``seed | (stream << 64)``, read through numpy's ``Philox.random_raw``,
whose output sequence numpy guarantees to be stable.  The 256-bit
counter (word 0 least significant) is incremented before each block, so
block ``b = 1, 2, ...`` yields raw words ``4(b-1)`` .. ``4b-1``.  All derived quantities are computed here from the raw 64-bit
words, never through ``numpy.random.Generator`` methods (those may
change between numpy releases):

* bits: each word supplies 64 bits, least significant first;
* uniforms: ``(word >> 11) * 2**-53``, in ``[0, 1)``;
* Bernoulli(p): one uniform per draw, success iff ``u < p``;
* bounded integers in ``[0, b)``: rejection sampling, reject ``w`` with
  ``w >= 2**64 - (2**64 mod b)``, return ``w mod b``.

Streams separate independent purposes that share a user seed.
"""

from __future__ import annotations

import numpy as np

RNG_NAME = "philox4x64-10"
RNG_VERSION = 1

STREAM_MATRIX = 0
STREAM_SOURCE = 1
STREAM_BITFIXING = 2
STREAM_MONTE_CARLO = 3
STREAM_BENCH = 4

_MASK64 = (1 << 64) - 1


class BitStream:
    """Deterministic draws keyed by ``(seed, stream)``."""

    def __init__(self, seed: int, stream: int = STREAM_MATRIX):
        if not 0 <= seed <= _MASK64:
            raise ValueError(f"seed must fit in 64 bits, got {seed}")
        self.seed = seed
        self.stream = stream
        self._gen = np.random.Philox(key=seed | (stream << 64))

    def words(self, count: int) -> np.ndarray:
        if count <= 0:
            return np.zeros(0, dtype=np.uint64)
        return self._gen.random_raw(count).astype(np.uint64, copy=False)

    def bits(self, count: int) -> np.ndarray:
        w = self.words((count + 63) // 64).astype("<u8")
        return np.unpackbits(w.view(np.uint8), count=count, bitorder="little")

    def uniforms(self, count: int) -> np.ndarray:
        return (self.words(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def bernoulli(self, count: int, p: float) -> np.ndarray:
        return (self.uniforms(count) < p).astype(np.uint8)

    def bounded(self, bound: int) -> int:
        if bound < 1:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            w = int(self.words(1)[0])
            if w < limit:
                return w % bound

    def sample_without_replacement(self, population: int, k: int) -> list[int]:
        """First ``k`` slots of a partial Fisher-Yates shuffle of ``range(population)``."""
        pool = list(range(population))
        for i in range(k):
            j = i + self.bounded(population - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
