"""Source models: specification, sampling and min-entropy.

Six concrete spec classes cover the four models.  Specs validate
themselves at construction, so sampling never fails on a spec that
exists.  Biases are carried as ``p_i = P[x_i = 1]``; the signed form
``s_i = 1 - 2 p_i`` (so ``|s_i| = 2 delta_i``) is what the Fourier
machinery consumes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence, Union

import numpy as np

from .errors import InvalidSpecError, UnsupportedModelError
from .gf2 import BitMatrix, BitVec, rank
from .prng import STREAM_BITFIXING, STREAM_SOURCE, BitStream

_BAND_TOL = 1e-12


def _in_band(p: float, e: float) -> bool:
    return abs(p - 0.5) <= e / 2 + _BAND_TOL


@dataclass(frozen=True)
class Independent:
    """Independent bits with ``P[x_i = 1] = biases[i]``."""

    biases: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(p) for p in self.biases)
        if not b:
            raise InvalidSpecError("independent source needs at least one bit")
        if any(not 0.0 <= p <= 1.0 for p in b):
            raise InvalidSpecError("biases must lie in [0, 1]")
        object.__setattr__(self, "biases", b)

    @property
    def n(self) -> int:
        return len(self.biases)


@dataclass(frozen=True)
class BoundedBias:
    """Independent bits with every ``p_i`` in ``[1/2 - e/2, 1/2 + e/2]``.

    Without explicit ``biases`` the source is taken at the adversarial
    corner ``p_i = 1/2 + e/2``.
    """

    n: int
    e: float
    biases: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpecError("n must be positive")
        if not 0.0 <= self.e < 1.0:
            raise InvalidSpecError(f"e must lie in [0, 1), got {self.e}")
        if self.biases is not None:
            b = tuple(float(p) for p in self.biases)
            if len(b) != self.n:
                raise InvalidSpecError(f"expected {self.n} biases, got {len(b)}")
            if any(not _in_band(p, self.e) for p in b):
                raise InvalidSpecError("a bias lies outside [1/2 - e/2, 1/2 + e/2]")
            object.__setattr__(self, "biases", b)

    def effective_biases(self) -> tuple[float, ...]:
        return self.biases if self.biases is not None else (0.5 + self.e / 2,) * self.n


@dataclass(frozen=True)
class Markov1:
    """Order-1 Markov chain with ``P[x_i=1 | x_{i-1}=b]`` inside the ``eps`` band.

    Transition defaults put the chain at the sticky corner
    (``1/2 -/+ eps/2``), the most correlated case the band allows.
    """

    n: int
    eps: float
    p1_given0: float | None = None
    p1_given1: float | None = None
    initial: float = 0.5

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpecError("n must be positive")
        if not 0.0 <= self.eps < 1.0:
            raise InvalidSpecError(f"eps must lie in [0, 1), got {self.eps}")
        if self.p1_given0 is None:
            object.__setattr__(self, "p1_given0", 0.5 - self.eps / 2)
        if self.p1_given1 is None:
            object.__setattr__(self, "p1_given1", 0.5 + self.eps / 2)
        for p in (self.p1_given0, self.p1_given1):
            if not _in_band(p, self.eps):
                raise InvalidSpecError(f"transition probability {p} outside the eps band")
        if not 0.0 <= self.initial <= 1.0:
            raise InvalidSpecError("initial probability must lie in [0, 1]")


@dataclass(frozen=True)
class ObliviousBitFixing:
    """Bits in ``fixed_mask`` are pinned to ``fixed_values``; the rest are fair."""

    n: int
    fixed_mask: BitVec
    fixed_values: BitVec

    def __post_init__(self):
        if len(self.fixed_mask) != self.n or len(self.fixed_values) != self.n:
            raise InvalidSpecError("mask and values must both have length n")
        if (self.fixed_values & self.fixed_mask) != self.fixed_values:
            raise InvalidSpecError("fixed_values has bits set outside fixed_mask")

    @property
    def k(self) -> int:
        return self.n - self.fixed_mask.popcount()

    def biases(self) -> tuple[float, ...]:
        mask = self.fixed_mask.to_bits()
        vals = self.fixed_values.to_bits()
        return tuple(float(v) if f else 0.5 for f, v in zip(mask, vals))

    def embedding(self) -> BitMatrix:
        """``k x n`` matrix with one unit column per free position."""
        free = np.flatnonzero(self.fixed_mask.to_bits() == 0)
        # k = 0 degenerates to one zero row: rank 0, constant output
        bits = np.zeros((max(len(free), 1), self.n), dtype=np.uint8)
        bits[np.arange(len(free)), free] = 1
        return BitMatrix.from_bits(bits)


def identity_columns(A: BitMatrix) -> list[int] | None:
    """Column indices ``c_0..c_{k-1}`` with column ``c_i`` equal to ``e_i``, if all exist."""
    bits = A.to_bits()
    weights = bits.sum(axis=0)
    found = []
    for i in range(A.rows):
        hits = np.flatnonzero((weights == 1) & (bits[i] == 1))
        if hits.size == 0:
            return None
        found.append(int(hits[0]))
    return found


@dataclass(frozen=True)
class NonObliviousBitFixing:
    """``X = Z A`` with ``Z`` uniform on ``{0,1}^k`` and ``A`` embedding ``I_k``."""

    k: int
    n: int
    A: BitMatrix

    def __post_init__(self):
        if self.A.shape != (self.k, self.n):
            raise InvalidSpecError(f"A must be {self.k}x{self.n}, got {self.A.rows}x{self.A.cols}")
        if identity_columns(self.A) is None:
            raise InvalidSpecError("A does not contain k columns forming an identity matrix")


@dataclass(frozen=True)
class LinearSubspace:
    """``X = Z A`` with ``Z`` drawn from ``inner`` and ``A`` of full row rank."""

    inner: Independent | Markov1
    A: BitMatrix

    def __post_init__(self):
        if not isinstance(self.inner, (Independent, Markov1)):
            raise InvalidSpecError("inner source must be Independent or Markov1")
        if self.inner.n != self.A.rows:
            raise InvalidSpecError(f"inner length {self.inner.n} != A rows {self.A.rows}")
        if rank(self.A) != self.A.rows:
            raise InvalidSpecError("A must have full row rank")

    @property
    def k(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols


SourceSpec = Union[Independent, BoundedBias, Markov1, ObliviousBitFixing, NonObliviousBitFixing, LinearSubspace]


def independent_biases(spec: SourceSpec) -> np.ndarray | None:
    """Per-bit ``p_i`` when the source is a product distribution, else ``None``."""
    if isinstance(spec, Independent):
        return np.array(spec.biases)
    if isinstance(spec, BoundedBias):
        return np.array(spec.effective_biases())
    if isinstance(spec, ObliviousBitFixing):
        return np.array(spec.biases())
    return None


def seed_source(spec: SourceSpec) -> tuple[SourceSpec, BitMatrix] | None:
    """For ``X = Z A`` models, the pair (source of ``Z``, ``A``)."""
    if isinstance(spec, NonObliviousBitFixing):
        return Independent((0.5,) * spec.k), spec.A
    if isinstance(spec, LinearSubspace):
        return spec.inner, spec.A
    return None


def sample_many(spec: SourceSpec, count: int, seed: int) -> np.ndarray:
    """``count`` independent draws as a ``(count, n)`` uint8 array.

    Row 0 is exactly :func:`sample` for the same seed.
    """
    stream = BitStream(seed, STREAM_SOURCE)
    return _sample(spec, count, stream)


def _sample(spec: SourceSpec, count: int, stream: BitStream) -> np.ndarray:
    p = independent_biases(spec)
    if p is not None:
        u = stream.uniforms(count * len(p)).reshape(count, len(p))
        return (u < p).astype(np.uint8)
    if isinstance(spec, Markov1):
        u = stream.uniforms(count * spec.n).reshape(count, spec.n)
        x = np.empty((count, spec.n), dtype=np.uint8)
        x[:, 0] = u[:, 0] < spec.initial
        for i in range(1, spec.n):
            thresh = np.where(x[:, i - 1] == 1, spec.p1_given1, spec.p1_given0)
            x[:, i] = u[:, i] < thresh
        return x
    inner, A = seed_source(spec)
    z = _sample(inner, count, stream)
    return ((z.astype(np.int64) @ A.to_bits().astype(np.int64)) & 1).astype(np.uint8)


def sample(spec: SourceSpec, seed: int) -> BitVec:
    return BitVec.from_bits(sample_many(spec, 1, seed)[0])


def min_entropy(spec: SourceSpec) -> float:
    """``H_min = -log2 max_x P[X = x]`` in bits.

    Bounded-bias sources without materialized biases report the worst
    case ``n log2(2/(1+e))``.  ``X = Z A`` with full-rank ``A`` is
    injective, so those sources inherit the min-entropy of ``Z``.
    """
    if isinstance(spec, BoundedBias) and spec.biases is None:
        return spec.n * math.log2(2.0 / (1.0 + spec.e))
    p = independent_biases(spec)
    if p is not None:
        return float(-np.sum(np.log2(np.maximum(p, 1.0 - p))))
    if isinstance(spec, NonObliviousBitFixing):
        return float(spec.k)
    if isinstance(spec, LinearSubspace):
        if isinstance(spec.inner, Markov1):
            raise UnsupportedModelError("min-entropy of a Markov inner source is not defined here")
        return min_entropy(spec.inner)
    raise UnsupportedModelError(f"min-entropy is not defined for {type(spec).__name__}")


def effective_e_markov1(eps: float) -> float:
    """``2 eps / (1 + eps^2)``: the hidden-Markov bias constant of an order-1 chain."""
    if not 0.0 <= eps < 1.0:
        raise InvalidSpecError(f"eps must lie in [0, 1), got {eps}")
    return 2.0 * eps / (1.0 + eps * eps)


def make_bitfixing(k: int, n: int, seed: int) -> NonObliviousBitFixing:
    """Random ``A``: unit columns ``e_0..e_{k-1}`` at seeded positions, uniform bits elsewhere."""
    if not 1 <= k <= n:
        raise InvalidSpecError(f"need 1 <= k <= n, got k={k}, n={n}")
    stream = BitStream(seed, STREAM_BITFIXING)
    positions = stream.sample_without_replacement(n, k)
    bits = stream.bits(k * n).reshape(k, n)
    bits[:, positions] = np.eye(k, dtype=np.uint8)
    return NonObliviousBitFixing(k, n, BitMatrix.from_bits(bits))


def xor_bias_independent(biases: Sequence[float], taps: Sequence[int]) -> float:
    """Exact signed bias ``P[z = 1] - 1/2`` of ``z = XOR of x_i over taps``."""
    s = 1.0
    for i in taps:
        s *= 1.0 - 2.0 * biases[i]
    return -0.5 * s


def xor_bias_markov1(spec: Markov1, taps: Sequence[int]) -> float:
    """Exact ``P[z = 1] - 1/2`` for an order-1 chain by forward recursion.

    State is ``(current bit, running parity)``; cost is linear in the
    last tap position.
    """
    tapset = set(taps)
    last = max(taps)
    if last >= spec.n or min(taps) < 0:
        raise InvalidSpecError("tap positions out of range")
    # prob[b, par]
    prob = np.zeros((2, 2))
    p0 = spec.initial
    prob[1, 1 if 0 in tapset else 0] += p0
    prob[0, 0] += 1.0 - p0
    for i in range(1, last + 1):
        nxt = np.zeros((2, 2))
        flip = 1 if i in tapset else 0
        for b in (0, 1):
            q = spec.p1_given1 if b else spec.p1_given0
            for par in (0, 1):
                w = prob[b, par]
                nxt[1, par ^ flip] += w * q
                nxt[0, par] += w * (1.0 - q)
        prob = nxt
    return float(prob[:, 1].sum() - 0.5)


# --- JSON --------------------------------------------------------------------

MODEL_NAMES = {
    Independent: "independent",
    BoundedBias: "bounded_bias",
    Markov1: "markov1",
    ObliviousBitFixing: "oblivious_bit_fixing",
    NonObliviousBitFixing: "nonoblivious_bit_fixing",
    LinearSubspace: "linear_subspace",
}


def _rows(A: BitMatrix) -> list[str]:
    return str(A).split("\n")


def spec_to_dict(spec: SourceSpec) -> dict[str, Any]:
    d: dict[str, Any] = {"model": MODEL_NAMES[type(spec)]}
    if isinstance(spec, Independent):
        d["biases"] = list(spec.biases)
    elif isinstance(spec, BoundedBias):
        d.update(n=spec.n, e=spec.e)
        if spec.biases is not None:
            d["biases"] = list(spec.biases)
    elif isinstance(spec, Markov1):
        d.update(n=spec.n, eps=spec.eps, p1_given0=spec.p1_given0, p1_given1=spec.p1_given1, initial=spec.initial)
    elif isinstance(spec, ObliviousBitFixing):
        d.update(n=spec.n, fixed_mask=str(spec.fixed_mask), fixed_values=str(spec.fixed_values))
    elif isinstance(spec, NonObliviousBitFixing):
        d.update(k=spec.k, n=spec.n, A=_rows(spec.A))
    else:
        d.update(inner=spec_to_dict(spec.inner), A=_rows(spec.A))
    return d


def _require(d: dict, *keys: str) -> list:
    missing = [k for k in keys if k not in d]
    if missing:
        raise InvalidSpecError(f"model {d.get('model')!r} is missing field(s): {', '.join(missing)}")
    return [d[k] for k in keys]


def spec_from_dict(d: dict[str, Any]) -> SourceSpec:
    model = d.get("model")
    try:
        if model == "independent":
            (biases,) = _require(d, "biases")
            return Independent(tuple(biases))
        if model == "bounded_bias":
            n, e = _require(d, "n", "e")
            b = d.get("biases")
            return BoundedBias(int(n), float(e), tuple(b) if b is not None else None)
        if model == "markov1":
            n, eps = _require(d, "n", "eps")
            return Markov1(int(n), float(eps), d.get("p1_given0"), d.get("p1_given1"), float(d.get("initial", 0.5)))
        if model == "oblivious_bit_fixing":
            n, mask, vals = _require(d, "n", "fixed_mask", "fixed_values")
            return ObliviousBitFixing(int(n), BitVec.from_str(mask), BitVec.from_str(vals))
        if model == "nonoblivious_bit_fixing":
            k, n = _require(d, "k", "n")
            if "A" in d:
                return NonObliviousBitFixing(int(k), int(n), BitMatrix.from_rows(d["A"]))
            (seed,) = _require(d, "seed")
            return make_bitfixing(int(k), int(n), int(seed))
        if model == "linear_subspace":
            inner, A = _require(d, "inner", "A")
            return LinearSubspace(spec_from_dict(inner), BitMatrix.from_rows(A))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidSpecError):
            raise
        raise InvalidSpecError(f"malformed {model} spec: {exc}") from exc
    raise InvalidSpecError(f"unknown model {model!r}")


def load_spec(path: str | Path) -> SourceSpec:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidSpecError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(d, dict):
        raise InvalidSpecError(f"{path}: top level must be an object")
    return spec_from_dict(d)


def save_spec(spec: SourceSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n")
