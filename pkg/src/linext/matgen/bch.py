"""Generator matrices of primitive narrow-sense binary BCH codes.

GF(2^kappa) arithmetic lives here and nowhere else.  Polynomials over
GF(2) are Python ints with the coefficient of ``x**i`` in bit ``i``.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidSpecError
from ..gf2 import BitMatrix
from .transform import Kind, TransformMatrix

# One primitive polynomial per field degree; frozen as part of the file format.
PRIMITIVE_POLYS: dict[int, int] = {
    2: 0b111,  # x^2 + x + 1
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,  # x^5 + x^2 + 1
    6: 0b1000011,  # x^6 + x + 1
    7: 0b10001001,  # x^7 + x^3 + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,  # x^9 + x^4 + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
    11: 0b100000000101,  # x^11 + x^2 + 1
    12: 0b1000001010011,  # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,  # x^13 + x^4 + x^3 + x + 1
    14: 0b100010001000011,  # x^14 + x^10 + x^6 + x + 1
    15: 0b1000000000000011,  # x^15 + x + 1
    16: 0b10001000000001011,  # x^16 + x^12 + x^3 + x + 1
}

KAPPA_MIN = 2
KAPPA_MAX = 16


class GaloisField:
    """GF(2^kappa) via exp/log tables over the fixed primitive polynomial."""

    def __init__(self, kappa: int):
        if not KAPPA_MIN <= kappa <= KAPPA_MAX:
            raise InvalidSpecError(f"kappa must lie in [{KAPPA_MIN}, {KAPPA_MAX}], got {kappa}")
        self.kappa = kappa
        self.order = (1 << kappa) - 1
        self.poly = PRIMITIVE_POLYS[kappa]
        exp = [0] * (2 * self.order)
        log = [0] * (self.order + 1)
        a = 1
        for i in range(self.order):
            exp[i] = a
            log[a] = i
            a <<= 1
            if a >> kappa:
                a ^= self.poly
        exp[self.order :] = exp[: self.order]
        self.exp = exp
        self.log = log

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def alpha_pow(self, i: int) -> int:
        return self.exp[i % self.order]


def cyclotomic_coset(i: int, n: int) -> list[int]:
    """``{i * 2**j mod n}`` in order of first appearance."""
    coset = []
    c = i % n
    while c not in coset:
        coset.append(c)
        c = (2 * c) % n
    return coset


def cyclotomic_cosets(n: int) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for i in range(n):
        if i not in seen:
            c = cyclotomic_coset(i, n)
            seen.update(c)
            out.append(c)
    return out


def minimal_polynomial(field: GaloisField, i: int) -> int:
    """Minimal polynomial of ``alpha**i`` as a GF(2) bit-int."""
    coeffs = [1]  # over GF(2^kappa), low degree first
    for c in cyclotomic_coset(i, field.order):
        root = field.alpha_pow(c)
        nxt = [0] * (len(coeffs) + 1)
        for d, a in enumerate(coeffs):
            nxt[d + 1] ^= a
            nxt[d] ^= field.mul(a, root)
        coeffs = nxt
    if any(a > 1 for a in coeffs):
        raise AssertionError("minimal polynomial has coefficients outside GF(2)")
    return sum(a << d for d, a in enumerate(coeffs))


def poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, b: int) -> int:
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def poly_str(p: int) -> str:
    """Coefficients high degree first, e.g. ``x^4 + x + 1`` -> ``"10011"``."""
    return format(p, "b")


def generator_polynomial(kappa: int, t: int) -> int:
    """lcm of the minimal polynomials of ``alpha, alpha^2, ..., alpha^(2t)``."""
    if t < 1:
        raise InvalidSpecError(f"t must be at least 1, got {t}")
    field = GaloisField(kappa)
    g = 1
    covered: set[int] = set()
    for i in range(1, 2 * t + 1):
        r = i % field.order
        if r in covered:
            continue
        covered.update(cyclotomic_coset(r, field.order))
        g = poly_mul(g, minimal_polynomial(field, r))
    return g


def bch_generator(kappa: int, t: int) -> TransformMatrix:
    """``n x m`` matrix whose column ``j`` is ``x**j g(x)`` read as a length-n word.

    Extraction ``y = x M`` with this layout equals ``x G^T`` for the
    generator matrix ``G`` whose rows are the cyclic shifts of ``g``.
    """
    g = generator_polynomial(kappa, t)
    n = (1 << kappa) - 1
    deg = g.bit_length() - 1
    if deg >= n:
        raise InvalidSpecError(f"BCH(kappa={kappa}, t={t}): code has zero dimension (deg g = {deg} >= n = {n})")
    m = n - deg
    gbits = np.array([(g >> i) & 1 for i in range(deg + 1)], dtype=np.uint8)
    bits = np.zeros((n, m), dtype=np.uint8)
    for j in range(m):
        bits[j : j + deg + 1, j] = gbits
    return TransformMatrix(
        BitMatrix.from_bits(bits),
        Kind.BCH,
        bch_params=(kappa, t),
        generator_poly=g,
    )
