"""Closed-form upper bounds on rho(Y), all kept as base-2 logarithms.

=====================  ==========================================  =============================
name                   log2 value                                  applies to
=====================  ==========================================  =============================
uniform_expectation    ``m - H_min - 1``                           E over uniform random M;
                                                                   sources with a min-entropy
fourier                ``log2 sum_{u!=0} |F(u)|/2`` (exact sum)    given M, product-form sources
bch                    ``m - n - 1 + n log2(1+e)``                 binomial-weight generator
                                                                   matrices, bounded bias e
hmm_uniform            ``m - n - 1 - log2(e)/2 + n log2(1+sqrt e)``  E over uniform M;
                                                                   hidden-Markov bias e
bitfixing_prob         ``m - k``                                   P[rho != 0] over uniform M;
                                                                   bit-fixing, uniform seeds
=====================  ==========================================  =============================

The sparse-matrix analysis bounds each coefficient probability by
``1/2 (1 +- (1-2p)^j)`` for ``|u| = j``; that band is not evaluated here
because the exact Fourier sum is available at every size this package
can enumerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import LinextError
from ..matgen import Kind, TransformMatrix
from ..sources import (
    BoundedBias,
    Independent,
    LinearSubspace,
    Markov1,
    NonObliviousBitFixing,
    ObliviousBitFixing,
    SourceSpec,
    effective_e_markov1,
    independent_biases,
    min_entropy,
)
from .exact import _reduce_to_independent, fourier_bound_log2

BOUND_NAMES = ("uniform_expectation", "fourier", "bch", "hmm_uniform", "bitfixing_prob")

MODELS = (
    "independent",
    "bounded_bias",
    "markov1",
    "oblivious_bit_fixing",
    "nonoblivious_bit_fixing",
    "linear_subspace",
)


def format_pow2(log2_value: float, digits: int = 2) -> str:
    """Scientific notation for ``2**log2_value`` computed in log space."""
    if log2_value == -math.inf:
        return "0"
    log10 = log2_value * math.log10(2.0)
    exp = math.floor(log10)
    mant = round(10 ** (log10 - exp), digits - 1)
    if mant >= 10:
        mant /= 10
        exp += 1
    return f"{mant:.{digits - 1}f}e{exp:+03d}"


@dataclass(frozen=True)
class BoundValue:
    log2: float | None
    applicable: bool
    note: str = ""

    @classmethod
    def na(cls, note: str) -> BoundValue:
        return cls(None, False, note)

    @property
    def value(self) -> float | None:
        if self.log2 is None:
            return None
        return 2.0**self.log2 if self.log2 > -1074 else 0.0

    def display(self) -> str | None:
        return None if self.log2 is None else format_pow2(self.log2)

    def as_dict(self) -> dict:
        log2 = self.log2
        if log2 is not None and not math.isfinite(log2):
            log2 = None  # JSON has no -inf; display carries "0"
        return {"log2": log2, "applicable": self.applicable, "display": self.display(), "note": self.note}


@dataclass(frozen=True)
class BoundReport:
    uniform_expectation: BoundValue
    fourier: BoundValue
    bch: BoundValue
    hmm_uniform: BoundValue
    bitfixing_prob: BoundValue

    def items(self):
        return [(name, getattr(self, name)) for name in BOUND_NAMES]

    def as_dict(self) -> dict:
        out: dict = {f"{name}_log2": b.as_dict()["log2"] for name, b in self.items()}
        out["bounds"] = {name: b.as_dict() for name, b in self.items()}
        return out


def _model_of(spec: SourceSpec | None, model: str | None) -> str | None:
    if spec is None:
        return model
    return {
        Independent: "independent",
        BoundedBias: "bounded_bias",
        Markov1: "markov1",
        ObliviousBitFixing: "oblivious_bit_fixing",
        NonObliviousBitFixing: "nonoblivious_bit_fixing",
        LinearSubspace: "linear_subspace",
    }[type(spec)]


def bound_report(
    spec: SourceSpec | None = None,
    T: TransformMatrix | None = None,
    *,
    model: str | None = None,
    n: int | None = None,
    m: int | None = None,
    hmin: float | None = None,
    e: float | None = None,
    k: int | None = None,
) -> BoundReport:
    """Evaluate every bound whose inputs are known.

    Parameters come from ``spec`` and ``T`` where possible; keyword
    arguments fill gaps or override.  A bound missing an input, or not
    valid for the model, is returned as inapplicable with a note.
    """
    model = _model_of(spec, model)
    if model is not None and model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    if T is not None:
        n = T.n if n is None else n
        m = T.m if m is None else m
    if spec is not None and n is None:
        n = spec.n

    if hmin is None and spec is not None:
        try:
            hmin = min_entropy(spec)
        except LinextError:
            hmin = None
    if k is None and spec is not None:
        if isinstance(spec, (ObliviousBitFixing, NonObliviousBitFixing)):
            k = spec.k
        elif isinstance(spec, LinearSubspace) and isinstance(spec.inner, Independent):
            if all(p == 0.5 for p in spec.inner.biases):
                k = spec.k
    if e is None and spec is not None:
        if isinstance(spec, BoundedBias):
            e = spec.e
        elif isinstance(spec, Markov1):
            e = effective_e_markov1(spec.eps)
        else:
            p = independent_biases(spec)
            if p is not None:
                e = float(np.max(np.abs(1.0 - 2.0 * p)))

    independent_family = model in (None, "independent", "bounded_bias", "oblivious_bit_fixing")
    bitfixing_family = model in (None, "oblivious_bit_fixing", "nonoblivious_bit_fixing", "linear_subspace")

    # uniform_expectation
    if model == "markov1":
        ue = BoundValue.na("min-entropy of a hidden-Markov source is not defined; see hmm_uniform")
    elif m is None or hmin is None:
        ue = BoundValue.na("needs m and H_min")
    else:
        ue = BoundValue(m - hmin - 1.0, True, "expectation over uniform random matrices")

    # fourier
    if spec is None or T is None:
        fb = BoundValue.na("needs a source spec and a matrix")
    else:
        try:
            B, p = _reduce_to_independent(T, spec)
            fb = BoundValue(fourier_bound_log2(B, p), True, "exact coefficient sum for this matrix")
        except LinextError as exc:
            fb = BoundValue.na(str(exc))

    # bch
    if T is not None and T.kind is not Kind.BCH:
        bb = BoundValue.na("matrix is not a BCH generator")
    elif not independent_family:
        bb = BoundValue.na(f"binomial-weight bound assumes independent bounded-bias input, not {model}")
    elif n is None or m is None or e is None:
        bb = BoundValue.na("needs n, m and e")
    else:
        bb = BoundValue(m - n - 1.0 + n * math.log2(1.0 + e), True, "assumes an exactly binomial weight distribution")

    # hmm_uniform
    if model not in (None, "markov1"):
        hb = BoundValue.na(f"hidden-Markov bound does not apply to {model}")
    elif n is None or m is None or e is None:
        hb = BoundValue.na("needs n, m and e")
    elif e <= 0.0:
        hb = BoundValue.na("degenerate at e = 0")
    else:
        hb = BoundValue(
            m - n - 1.0 - 0.5 * math.log2(e) + n * math.log2(1.0 + math.sqrt(e)),
            True,
            "expectation over uniform random matrices",
        )

    # bitfixing_prob
    if not bitfixing_family:
        kb = BoundValue.na(f"bit-fixing bound does not apply to {model}")
    elif m is None or k is None:
        kb = BoundValue.na("needs m and k (uniform seed)")
    else:
        kb = BoundValue(float(m - k), True, "P[rho != 0] over uniform random matrices")

    return BoundReport(ue, fb, bb, hb, kb)
