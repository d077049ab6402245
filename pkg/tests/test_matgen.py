import math

import numpy as np
import pytest

from linext.errors import FormatError, InvalidSpecError
from linext.gf2 import BitMatrix, rank
from linext.matgen import (
    PRIMITIVE_POLYS,
    Kind,
    TransformMatrix,
    bch_generator,
    cyclotomic_cosets,
    default_density,
    from_bytes,
    gen_fixed_column_weight,
    gen_sparse,
    gen_uniform,
    generator_polynomial,
    load_matrix,
    poly_mod,
    poly_str,
    save_matrix,
    to_bytes,
    weight_distribution,
)
from linext.matgen.io import HEADER


def four_sigma(p, count):
    return 4 * math.sqrt(p * (1 - p) / count)


class TestUniform:
    def test_deterministic(self):
        assert gen_uniform(4, 2, 17).matrix == gen_uniform(4, 2, 17).matrix
        assert gen_uniform(64, 32, 17).matrix != gen_uniform(64, 32, 18).matrix

    def test_density(self):
        T = gen_uniform(256, 128, 5)
        assert abs(T.matrix.popcount() / (256 * 128) - 0.5) <= four_sigma(0.5, 256 * 128)
        assert T.kind is Kind.UNIFORM and T.density == 0.5 and T.seed == 5

    def test_expansion_rejected(self):
        with pytest.raises(InvalidSpecError):
            gen_uniform(4, 5, 0)


class TestSparse:
    def test_default_density(self):
        assert default_density(1024) == pytest.approx(100 / 1024)
        assert default_density(16) == 0.5
        assert default_density(2) == pytest.approx(0.5)

    def test_density(self):
        p = default_density(1024)
        T = gen_sparse(1024, 512, None, 3)
        assert T.density == p
        assert abs(T.matrix.popcount() / (1024 * 512) - p) <= four_sigma(p, 1024 * 512)

    def test_deterministic(self):
        assert gen_sparse(40, 20, 0.1, 1).matrix == gen_sparse(40, 20, 0.1, 1).matrix

    @pytest.mark.parametrize("p", [0.0, 0.6, -0.1])
    def test_bad_density(self, p):
        with pytest.raises(InvalidSpecError):
            gen_sparse(8, 4, p, 0)


class TestFixedColumnWeight:
    def test_full_weight(self):
        T = gen_fixed_column_weight(8, 3, 8, 0)
        assert T.matrix.popcount() == 24

    def test_weight_one(self):
        assert gen_fixed_column_weight(16, 4, 1, 0).matrix.column_weights().tolist() == [1] * 4

    def test_weight_eight(self):
        T = gen_fixed_column_weight(64, 16, 8, 9)
        assert T.matrix.column_weights().tolist() == [8] * 16
        assert T.density == 8 / 64

    def test_too_heavy(self):
        with pytest.raises(InvalidSpecError):
            gen_fixed_column_weight(8, 4, 9, 0)

    def test_declared_weight_checked(self):
        with pytest.raises(InvalidSpecError):
            TransformMatrix(BitMatrix.identity(3), Kind.FIXED_COLUMN_WEIGHT, column_weight=2)


def _gf_powers(kappa):
    """alpha^i as integers, built by repeated multiplication by x."""
    poly, n = PRIMITIVE_POLYS[kappa], (1 << kappa) - 1
    out, a = [], 1
    for _ in range(n):
        out.append(a)
        a <<= 1
        if a >> kappa:
            a ^= poly
    return out


def _eval_at_power(g, i, pw):
    n = len(pw)
    acc = 0
    for d in range(g.bit_length()):
        if (g >> d) & 1:
            acc ^= pw[(i * d) % n]
    return acc


class TestBCH:
    @pytest.mark.parametrize(
        "kappa,t,g,m",
        [(4, 1, "10011", 11), (4, 2, "111010001", 7), (2, 1, "111", 1), (4, 3, "10100110111", 5), (5, 3, "1000111110101111", 16)],
    )
    def test_generator_table(self, kappa, t, g, m):
        T = bch_generator(kappa, t)
        assert poly_str(T.generator_poly) == g
        assert (T.n, T.m) == ((1 << kappa) - 1, m)

    @pytest.mark.parametrize("kappa,t", [(3, 1), (4, 2), (5, 2), (6, 3), (7, 4), (8, 5)])
    def test_roots_and_divisibility(self, kappa, t):
        g = generator_polynomial(kappa, t)
        pw = _gf_powers(kappa)
        n = len(pw)
        assert len(set(pw)) == n  # the tabled polynomial is primitive
        for i in range(1, 2 * t + 1):
            assert _eval_at_power(g, i, pw) == 0
        assert poly_mod((1 << n) | 1, g) == 0
        needed = {c for c in range(1, 2 * t + 1)}
        deg = sum(len(c) for c in cyclotomic_cosets(n) if needed & set(c))
        assert g.bit_length() - 1 == deg

    @pytest.mark.parametrize("kappa,t", [(4, 1), (4, 2), (5, 3), (6, 2)])
    def test_columns_are_codewords(self, kappa, t):
        T = bch_generator(kappa, t)
        assert rank(T.matrix) == T.m
        bits = T.matrix.to_bits()
        for j in range(T.m):
            word = sum(int(b) << i for i, b in enumerate(bits[:, j]))
            assert poly_mod(word, T.generator_poly) == 0

    def test_zero_dimension(self):
        with pytest.raises(InvalidSpecError, match="zero dimension"):
            bch_generator(3, 4)

    @pytest.mark.parametrize("kappa", [1, 17])
    def test_kappa_range(self, kappa):
        with pytest.raises(InvalidSpecError):
            bch_generator(kappa, 1)

    def test_minimum_weight(self):
        wd = weight_distribution(bch_generator(4, 2))
        assert wd.mode == "exact"
        assert wd.counts.tolist() == [1, 0, 0, 0, 0, 18, 30, 15, 15, 30, 18, 0, 0, 0, 0, 1]
        assert wd.min_nonzero_weight() >= 5


class TestWeightDistribution:
    def test_identity_binomial(self):
        wd = weight_distribution(TransformMatrix.explicit(BitMatrix.identity(10)))
        assert wd.counts.tolist() == [math.comb(10, i) for i in range(11)]
        assert np.allclose(wd.relative_deviation(), 0, atol=1e-12)
        assert wd.total == 2**10

    def test_uniform_exact_totals(self):
        T = gen_uniform(32, 16, 4)
        wd = weight_distribution(T)
        assert wd.total == 2**16
        if rank(T.matrix) == 16:
            assert wd.counts[0] == 1
        assert wd.max_abs_deviation() < 0.01

    def test_sampled_mode(self):
        T = gen_uniform(40, 30, 1)
        wd = weight_distribution(T, exact_limit=24, samples=20_000, seed=3)
        assert wd.mode == "sampled" and wd.sample_count == wd.total == 20_000
        assert wd.max_abs_deviation() < 0.02
        again = weight_distribution(T, exact_limit=24, samples=20_000, seed=3)
        assert np.array_equal(wd.counts, again.counts)

    def test_csv(self, tmp_path):
        wd = weight_distribution(bch_generator(4, 2))
        text = wd.to_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "weight,count,binomial_reference,relative_deviation"
        assert len(lines) == 17
        assert lines[6].split(",")[:2] == ["5", "18"]
        wd.write(tmp_path / "b.wdist")
        assert (tmp_path / "b.wdist").read_text() == text


class TestFileFormat:
    @pytest.mark.parametrize(
        "T",
        [
            gen_uniform(20, 9, 77),
            gen_sparse(33, 17, 0.2, 2**64 - 1),
            gen_fixed_column_weight(16, 8, 3, 5),
            bch_generator(4, 2),
            TransformMatrix.explicit(BitMatrix.identity(4)),
        ],
        ids=lambda T: T.kind.value,
    )
    def test_round_trip(self, T, tmp_path):
        path = tmp_path / "m.bin"
        save_matrix(T, path)
        U = load_matrix(path)
        assert U == T
        assert path.read_bytes() == to_bytes(U)
        assert len(path.read_bytes()) == 32 + T.n * ((T.m + 7) // 8)

    def test_layout(self):
        T = TransformMatrix.explicit(BitMatrix.from_rows(["110000001", "000000000"]))
        data = to_bytes(T)
        magic, version, code, kappa, t, w, n, m, seed, density = HEADER.unpack_from(data)
        assert (magic, version, code, n, m, seed) == (b"LX", 1, 4, 2, 9, 0)
        assert math.isnan(density)
        assert data[32:] == bytes([0b00000011, 0b00000001, 0, 0])

    def test_bad_magic(self):
        data = bytearray(to_bytes(gen_uniform(8, 4, 0)))
        data[0:2] = b"ZZ"
        with pytest.raises(FormatError, match="magic"):
            from_bytes(bytes(data))

    def test_truncated(self):
        with pytest.raises(FormatError):
            from_bytes(to_bytes(gen_uniform(8, 4, 0))[:-1])

    def test_dirty_padding(self):
        data = bytearray(to_bytes(gen_uniform(8, 4, 0)))
        data[32] |= 0x80
        with pytest.raises(FormatError, match="padding"):
            from_bytes(bytes(data))

    def test_tampered_bch(self):
        data = bytearray(to_bytes(bch_generator(4, 2)))
        data[32] ^= 1
        with pytest.raises(FormatError):
            from_bytes(bytes(data))
