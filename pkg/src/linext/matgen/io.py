"""On-disk matrix format (version 1).

All integers little-endian.  32-byte header::

    offset size  field
    0      2     magic b"LX"
    2      1     version (1)
    3      1     kind: 0 uniform, 1 sparse, 2 fixed-column-weight, 3 bch, 4 explicit
    4      1     bch kappa (0 unless bch)
    5      1     bch t (0 unless bch)
    6      2     column weight (0 unless fixed-column-weight)
    8      4     n (rows)
    12     4     m (cols)
    16     8     seed (0 when absent)
    24     8     density, IEEE-754 double (NaN when absent)

followed by ``n`` rows of ``ceil(m/8)`` bytes each; bit ``j`` of a row
is bit ``j % 8`` of byte ``j // 8`` (LSB first), padding bits zero.
For bch the generator polynomial is recomputed from (kappa, t) on load
and checked against the stored rows.
"""

from __future__ import annotations

import math
import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError
from ..gf2 import BitMatrix
from .bch import bch_generator
from .transform import Kind, TransformMatrix

MAGIC = b"LX"
VERSION = 1
HEADER = struct.Struct("<2sBBBBHIIQd")
assert HEADER.size == 32

KIND_CODES = {
    Kind.UNIFORM: 0,
    Kind.SPARSE: 1,
    Kind.FIXED_COLUMN_WEIGHT: 2,
    Kind.BCH: 3,
    Kind.EXPLICIT: 4,
}
_CODE_KINDS = {v: k for k, v in KIND_CODES.items()}


def to_bytes(T: TransformMatrix) -> bytes:
    kappa, t = T.bch_params or (0, 0)
    weight = T.column_weight or 0
    if weight > 0xFFFF:
        raise FormatError(f"column weight {weight} does not fit the 16-bit header field")
    header = HEADER.pack(
        MAGIC,
        VERSION,
        KIND_CODES[T.kind],
        kappa,
        t,
        weight,
        T.n,
        T.m,
        T.seed or 0,
        math.nan if T.density is None else T.density,
    )
    body = np.packbits(T.matrix.to_bits(), axis=1, bitorder="little")
    return header + body.tobytes()


def from_bytes(data: bytes) -> TransformMatrix:
    if len(data) < HEADER.size:
        raise FormatError(f"file too short for header ({len(data)} bytes)")
    magic, version, code, kappa, t, weight, n, m, seed, density = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported format version {version}")
    if code not in _CODE_KINDS:
        raise FormatError(f"unknown kind code {code}")
    if n < 1 or m < 1:
        raise FormatError(f"bad dimensions {n}x{m}")
    row_bytes = (m + 7) // 8
    if len(data) != HEADER.size + n * row_bytes:
        raise FormatError(f"expected {HEADER.size + n * row_bytes} bytes for a {n}x{m} matrix, got {len(data)}")
    raw = np.frombuffer(data, dtype=np.uint8, offset=HEADER.size).reshape(n, row_bytes)
    full = np.unpackbits(raw, axis=1, bitorder="little")
    if full[:, m:].any():
        raise FormatError("nonzero row padding bits")
    matrix = BitMatrix.from_bits(full[:, :m])
    kind = _CODE_KINDS[code]
    if kind is Kind.BCH:
        ref = bch_generator(kappa, t)
        if ref.matrix != matrix:
            raise FormatError(f"rows do not match BCH(kappa={kappa}, t={t})")
        return ref
    return TransformMatrix(
        matrix,
        kind,
        density=None if math.isnan(density) else density,
        seed=seed if kind in (Kind.UNIFORM, Kind.SPARSE, Kind.FIXED_COLUMN_WEIGHT) else None,
        column_weight=weight if kind is Kind.FIXED_COLUMN_WEIGHT else None,
    )


def save_matrix(T: TransformMatrix, path: str | Path) -> None:
    Path(path).write_bytes(to_bytes(T))


def load_matrix(path: str | Path) -> TransformMatrix:
    return from_bytes(Path(path).read_bytes())
