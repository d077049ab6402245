"""Block and streaming extraction.

Streaming follows the accumulator scheme: input bit ``j`` (0-based)
XORs row ``j mod n`` of ``M`` into an ``m``-bit register ``V``.  In
accumulate mode ``V`` is never reset and, once ``bits_in > n``, output
bits are read from ``V`` cyclically until
``bits_out == floor((bits_in - n) * m / n)``.  In block mode ``V`` is
emitted whole and zeroed every ``n`` inputs, which reproduces
:func:`extract_block` exactly.

The per-bit work flips the columns listed for that row, so the cost of
one input bit is the row weight of ``M``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

import numba
import numpy as np

from .errors import DimensionError
from .gf2 import BitVec, matvec
from .matgen import TransformMatrix
from .prng import STREAM_BENCH, BitStream


class Mode(str, Enum):
    ACCUMULATE = "accumulate"
    BLOCK = "block"


def extract_block(T: TransformMatrix, X: BitVec) -> BitVec:
    if len(X) != T.n:
        raise DimensionError(f"input block length mismatch: expected {T.n}, got {len(X)}")
    return matvec(X, T.matrix)


def extract_blocks(T: TransformMatrix, X: np.ndarray) -> np.ndarray:
    """Row-wise ``X M`` for a ``(count, n)`` 0/1 array."""
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[1] != T.n:
        raise DimensionError(f"expected blocks of length {T.n}, got shape {X.shape}")
    out = np.empty((X.shape[0], T.m), dtype=np.uint8)
    M = T.matrix.to_bits().astype(np.int32)
    step = 1 << 14
    for lo in range(0, X.shape[0], step):
        out[lo : lo + step] = (X[lo : lo + step].astype(np.int32) @ M) & 1
    return out


@numba.njit(cache=True)
def _stream_kernel(bits, indptr, indices, V, n, m, bits_in, bits_out, block, out):
    count = 0
    for b in bits:
        r = bits_in % n
        if b:
            for q in range(indptr[r], indptr[r + 1]):
                V[indices[q]] ^= 1
        bits_in += 1
        if block:
            if bits_in % n == 0:
                for c in range(m):
                    out[count] = V[c]
                    count += 1
                    V[c] = 0
                bits_out += m
        elif bits_in > n:
            target = ((bits_in - n) * m) // n
            while bits_out < target:
                out[count] = V[bits_out % m]
                count += 1
                bits_out += 1
    return bits_in, bits_out, count


class StreamState:
    """Single-owner streaming extractor; not thread-safe."""

    def __init__(self, T: TransformMatrix, mode: Mode | str = Mode.ACCUMULATE):
        self.matrix = T
        self.mode = Mode(mode)
        self._indptr, self._indices = T.matrix.row_index_lists()
        self._v = np.zeros(T.m, dtype=np.uint8)
        self.bits_in = 0
        self.bits_out = 0

    @property
    def V(self) -> BitVec:
        return BitVec.from_bits(self._v)

    def push_bits(self, bits: np.ndarray) -> np.ndarray:
        """Consume a run of input bits; return the output bits they release."""
        bits = np.ascontiguousarray(bits, dtype=np.uint8).reshape(-1)
        n, m = self.matrix.n, self.matrix.m
        out = np.empty(bits.size * m // n + m + 1, dtype=np.uint8)
        self.bits_in, self.bits_out, count = _stream_kernel(
            bits,
            self._indptr,
            self._indices,
            self._v,
            n,
            m,
            self.bits_in,
            self.bits_out,
            self.mode is Mode.BLOCK,
            out,
        )
        return out[:count].copy()

    def push(self, bit: int) -> list[int]:
        return self.push_bits(np.array([1 if bit else 0], dtype=np.uint8)).tolist()


@dataclass(frozen=True)
class BenchReport:
    n: int
    m: int
    ones_per_row: float
    input_bits: int
    output_bits: int
    seconds: float
    input_rate: float | None
    output_rate: float | None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def stream_throughput_bench(
    T: TransformMatrix, input_len: int, seed: int, chunk: int = 1 << 22
) -> BenchReport:
    """Time accumulate-mode processing of ``input_len`` pseudorandom bits.

    Input generation is excluded from the timing; the kernel is compiled
    before the clock starts.
    """
    state = StreamState(T, Mode.ACCUMULATE)
    StreamState(T, Mode.ACCUMULATE).push_bits(np.zeros(1, dtype=np.uint8))
    stream = BitStream(seed, STREAM_BENCH)
    elapsed = 0.0
    produced = 0
    left = input_len
    while left > 0:
        bits = stream.bits(min(chunk, left))
        t0 = time.perf_counter()
        produced += state.push_bits(bits).size
        elapsed += time.perf_counter() - t0
        left -= bits.size
    rate_ok = input_len > 0 and elapsed > 0
    return BenchReport(
        n=T.n,
        m=T.m,
        ones_per_row=T.matrix.popcount() / T.n,
        input_bits=input_len,
        output_bits=produced,
        seconds=elapsed,
        input_rate=input_len / elapsed if rate_ok else None,
        output_rate=produced / elapsed if rate_ok else None,
    )
