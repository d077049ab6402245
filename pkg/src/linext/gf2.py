"""Bit-packed vectors and matrices over GF(2).

Bits are stored in little-endian 64-bit words: bit ``i`` of a vector
lives in word ``i // 64`` at position ``i % 64``.  Padding bits past the
logical length are always zero, which lets equality, hashing and XOR
work on whole words.  Both types are immutable; every operation returns
a fresh object.

Vectors are rows, and extraction is ``y = x M`` throughout.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError

WORD_BITS = 64
_WORD = np.dtype("<u8")


def n_words(length: int) -> int:
    return (length + WORD_BITS - 1) // WORD_BITS


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a ``(..., L)`` array of 0/1 into ``(..., ceil(L/64))`` words."""
    bits = np.asarray(bits, dtype=np.uint8)
    length = bits.shape[-1]
    packed = np.packbits(bits, axis=-1, bitorder="little")
    pad = n_words(length) * 8 - packed.shape[-1]
    if pad:
        widths = [(0, 0)] * (packed.ndim - 1) + [(0, pad)]
        packed = np.pad(packed, widths)
    return np.ascontiguousarray(packed).view(_WORD)


def unpack_words(words: np.ndarray, length: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`; returns uint8 bits."""
    words = np.ascontiguousarray(words, dtype=_WORD)
    raw = words.view(np.uint8)
    return np.unpackbits(raw, axis=-1, count=length, bitorder="little")


def popcount_words(words: np.ndarray) -> np.ndarray:
    """Per-row popcount of a ``(..., W)`` word array."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _tail_mask(length: int) -> int:
    rem = length % WORD_BITS
    return (1 << rem) - 1 if rem else (1 << WORD_BITS) - 1


class BitVec:
    """Immutable packed bit vector."""

    __slots__ = ("_len", "_words")

    def __init__(self, words: np.ndarray, length: int):
        if length < 0:
            raise ValueError("length must be non-negative")
        words = np.array(words, dtype=_WORD).reshape(-1)
        if words.size != n_words(length):
            raise ValueError(f"need {n_words(length)} words for {length} bits, got {words.size}")
        if length and int(words[-1]) & ~_tail_mask(length):
            raise ValueError("padding bits beyond length must be zero")
        self._len = length
        self._words = _readonly(words)

    @classmethod
    def zeros(cls, length: int) -> BitVec:
        return cls(np.zeros(n_words(length), dtype=_WORD), length)

    @classmethod
    def from_bits(cls, bits: Iterable[int] | np.ndarray) -> BitVec:
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        arr = arr.astype(np.uint8).reshape(-1)
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(pack_bits(arr), arr.size)

    @classmethod
    def from_str(cls, text: str) -> BitVec:
        """``"1011"`` -> bit 0 is ``1``, bit 1 is ``0``, and so on."""
        text = text.strip()
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls.from_bits([int(c) for c in text])

    @classmethod
    def from_int(cls, value: int, length: int) -> BitVec:
        """Bit ``i`` of the vector is bit ``i`` of ``value``."""
        if value < 0 or value >> length:
            raise ValueError(f"{value} does not fit in {length} bits")
        words = [(value >> (WORD_BITS * w)) & ((1 << WORD_BITS) - 1) for w in range(n_words(length))]
        return cls(np.array(words, dtype=_WORD), length)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self._len

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self._len
        if not 0 <= i < self._len:
            raise IndexError(i)
        return int(self._words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & 1

    def __iter__(self):
        return iter(self.to_bits().tolist())

    def set(self, i: int, value: int) -> BitVec:
        """Return a copy with bit ``i`` replaced."""
        if not 0 <= i < self._len:
            raise IndexError(i)
        words = self._words.copy()
        bit = np.uint64(1) << np.uint64(i % WORD_BITS)
        if value:
            words[i // WORD_BITS] |= bit
        else:
            words[i // WORD_BITS] &= ~bit
        return BitVec(words, self._len)

    def _check_same(self, other: BitVec) -> None:
        if len(other) != self._len:
            raise DimensionError(f"length mismatch: expected {self._len}, got {len(other)}")

    def __xor__(self, other: BitVec) -> BitVec:
        self._check_same(other)
        return BitVec(self._words ^ other._words, self._len)

    def __and__(self, other: BitVec) -> BitVec:
        self._check_same(other)
        return BitVec(self._words & other._words, self._len)

    def dot(self, other: BitVec) -> int:
        """Inner product over GF(2)."""
        return (self & other).popcount() & 1

    def popcount(self) -> int:
        return int(popcount_words(self._words))

    def to_bits(self) -> np.ndarray:
        return unpack_words(self._words, self._len)

    def to_int(self) -> int:
        return sum(int(w) << (WORD_BITS * k) for k, w in enumerate(self._words))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self._len == other._len and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self._len, self._words.tobytes()))

    def __str__(self) -> str:
        return "".join(map(str, self.to_bits().tolist()))

    def __repr__(self) -> str:
        body = str(self) if self._len <= 64 else f"{str(self)[:61]}..."
        return f"BitVec({body!r}, len={self._len})"


class BitMatrix:
    """Immutable packed matrix over GF(2), stored row-major.

    ``words`` has shape ``(rows, ceil(cols / 64))``; each row is packed the
    same way as a :class:`BitVec` of length ``cols``.
    """

    __slots__ = ("_rows", "_cols", "_words")

    def __init__(self, words: np.ndarray, rows: int, cols: int):
        if rows < 1 or cols < 1:
            raise DimensionError(f"matrix must be at least 1x1, got {rows}x{cols}")
        words = np.array(words, dtype=_WORD).reshape(rows, n_words(cols))
        if np.any(words[:, -1] & np.uint64(~_tail_mask(cols) & ((1 << 64) - 1))):
            raise ValueError("padding bits beyond cols must be zero")
        self._rows = rows
        self._cols = cols
        self._words = _readonly(words)

    @classmethod
    def from_bits(cls, bits: np.ndarray | Sequence[Sequence[int]]) -> BitMatrix:
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-D array, got shape {arr.shape}")
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(pack_bits(arr), *arr.shape)

    @classmethod
    def from_rows(cls, rows: Sequence[str | BitVec]) -> BitMatrix:
        vecs = [BitVec.from_str(r) if isinstance(r, str) else r for r in rows]
        if not vecs:
            raise DimensionError("need at least one row")
        cols = len(vecs[0])
        if any(len(v) != cols for v in vecs):
            raise DimensionError("rows have unequal lengths")
        return cls(np.stack([v.words for v in vecs]), len(vecs), cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_bits(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(np.zeros((rows, n_words(cols)), dtype=_WORD), rows, cols)

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return self._rows, self._cols

    @property
    def words(self) -> np.ndarray:
        return self._words

    def row(self, i: int) -> BitVec:
        return BitVec(self._words[i].copy(), self._cols)

    def column(self, j: int) -> BitVec:
        return BitVec.from_bits(self.to_bits()[:, j])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self._rows and 0 <= j < self._cols):
            raise IndexError(ij)
        return int(self._words[i, j // WORD_BITS] >> np.uint64(j % WORD_BITS)) & 1

    def to_bits(self) -> np.ndarray:
        return unpack_words(self._words, self._cols)

    def transpose(self) -> BitMatrix:
        return BitMatrix.from_bits(self.to_bits().T)

    @property
    def T(self) -> BitMatrix:
        return self.transpose()

    def popcount(self) -> int:
        return int(popcount_words(self._words).sum())

    def row_weights(self) -> np.ndarray:
        return popcount_words(self._words)

    def column_weights(self) -> np.ndarray:
        return self.to_bits().sum(axis=0, dtype=np.int64)

    def row_index_lists(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR view ``(indptr, indices)`` of the set bits in each row."""
        rr, cc = np.nonzero(self.to_bits())
        indptr = np.zeros(self._rows + 1, dtype=np.int64)
        np.add.at(indptr, rr + 1, 1)
        return np.cumsum(indptr), cc.astype(np.int64)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self.shape, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self._rows}x{self._cols}, ones={self.popcount()})"

    def __str__(self) -> str:
        return "\n".join("".join(map(str, r)) for r in self.to_bits().tolist())


def matvec(x: BitVec, M: BitMatrix) -> BitVec:
    """``y = x M``: XOR of the rows of ``M`` selected by ``x``."""
    if len(x) != M.rows:
        raise DimensionError(f"vector length mismatch: expected {M.rows}, got {len(x)}")
    selected = M.words[x.to_bits().astype(bool)]
    if selected.shape[0] == 0:
        return BitVec.zeros(M.cols)
    return BitVec(np.bitwise_xor.reduce(selected, axis=0), M.cols)


def matmul(A: BitMatrix, M: BitMatrix) -> BitMatrix:
    """GF(2) product ``A M``."""
    if A.cols != M.rows:
        raise DimensionError(f"inner dimension mismatch: A has {A.cols} columns, M has {M.rows} rows")
    # int64 accumulation is exact for any realistic inner dimension
    prod = A.to_bits().astype(np.int64) @ M.to_bits().astype(np.int64)
    return BitMatrix.from_bits((prod & 1).astype(np.uint8))


def rank(B: BitMatrix) -> int:
    """GF(2) rank by Gaussian elimination on a private copy of the rows."""
    w = B.words.copy()
    rows = B.rows
    r = 0
    for col in range(B.cols):
        word, bit = divmod(col, WORD_BITS)
        hits = np.flatnonzero((w[r:, word] >> np.uint64(bit)) & np.uint64(1))
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            w[[r, p]] = w[[p, r]]
        sel = ((w[:, word] >> np.uint64(bit)) & np.uint64(1)).astype(bool)
        sel[r] = False
        w[sel] ^= w[r]
        r += 1
        if r == rows:
            break
    return r


def column_span(M: BitMatrix, chunk_bits: int = 16):
    """Yield ``(start, images)`` covering ``M u^T`` for every ``u`` in ``{0,1}^cols``.

    ``u`` is read as an integer with bit ``j`` selecting column ``j``;
    ``images[k]`` holds the packed length-``rows`` word of ``u = start + k``.
    Chunks hold ``2**chunk_bits`` images so memory stays bounded.
    """
    cols = M.transpose().words
    m = M.cols
    low = min(m, chunk_bits)
    base = np.zeros((1 << low, cols.shape[1]), dtype=_WORD)
    for j in range(low):
        base[1 << j : 2 << j] = base[: 1 << j] ^ cols[j]
    if low == m:
        yield 0, base
        return
    high = cols[low:]
    offset = np.zeros(cols.shape[1], dtype=_WORD)
    prev = 0
    for h in range(1 << (m - low)):
        # Gray-code walk over the high columns: one XOR per chunk
        g = h ^ (h >> 1)
        diff = g ^ prev
        if diff:
            offset ^= high[diff.bit_length() - 1]
        prev = g
        yield g << low, base ^ offset
