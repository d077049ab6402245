"""Packed-bit data files.

A bits file is headerless: bit ``i`` of the stream is bit ``i % 8`` of
byte ``i // 8`` (least significant bit first).  The final byte is
zero-padded, so the file alone does not record a bit count; callers
that need an exact length pass it explicitly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import FormatError


def pack_bytes(bits: np.ndarray) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8).reshape(-1), bitorder="little").tobytes()


def unpack_bytes(data: bytes, nbits: int | None = None) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    if nbits is None:
        return bits
    if nbits > bits.size:
        raise FormatError(f"requested {nbits} bits but the data holds only {bits.size}")
    return bits[:nbits]


def write_bits(path: str | Path, bits: np.ndarray) -> None:
    Path(path).write_bytes(pack_bytes(bits))


def read_bits(path: str | Path, nbits: int | None = None) -> np.ndarray:
    return unpack_bytes(Path(path).read_bytes(), nbits)
