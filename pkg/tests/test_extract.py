import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linext.errors import DimensionError
from linext.extract import Mode, StreamState, extract_block, extract_blocks, stream_throughput_bench
from linext.gf2 import BitMatrix, BitVec, matvec
from linext.matgen import TransformMatrix, gen_fixed_column_weight, gen_sparse, gen_uniform


def explicit(rows):
    return TransformMatrix.explicit(BitMatrix.from_rows(rows))


def reference_stream(M: np.ndarray, bits, accumulate=True):
    """Straight transcription of the per-bit schedule, one bit at a time."""
    n, m = M.shape
    V = np.zeros(m, dtype=np.uint8)
    out = []
    for j, b in enumerate(bits):
        if b:
            V ^= M[j % n]
        done = j + 1
        if accumulate:
            target = max(0, (done - n) * m // n)
            while len(out) < target:
                out.append(int(V[len(out) % m]))
        elif done % n == 0:
            out.extend(V.tolist())
            V[:] = 0
    return out


class TestBlock:
    def test_identity(self):
        T = TransformMatrix.explicit(BitMatrix.identity(4))
        assert extract_block(T, BitVec.from_str("1011")) == BitVec.from_str("1011")

    def test_zero_input(self):
        assert extract_block(gen_uniform(16, 9, 1), BitVec.zeros(16)) == BitVec.zeros(9)

    def test_sparse_example(self):
        T = gen_sparse(8, 3, 0.3, 4)
        x = BitVec.from_str("10110010")
        M = T.matrix.to_bits()
        expect = [int(sum(x[i] * M[i, j] for i in range(8)) % 2) for j in range(3)]
        assert extract_block(T, x).to_bits().tolist() == expect

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            extract_block(gen_uniform(8, 4, 0), BitVec.zeros(7))

    def test_many_blocks(self, rng):
        T = gen_uniform(20, 7, 2)
        X = rng.integers(0, 2, (300, 20)).astype(np.uint8)
        Y = extract_blocks(T, X)
        for x, y in zip(X[:30], Y[:30]):
            assert y.tolist() == matvec(BitVec.from_bits(x), T.matrix).to_bits().tolist()
        with pytest.raises(DimensionError):
            extract_blocks(T, X[:, :5])


class TestStream:
    def test_hand_schedule(self):
        # rows r0..r3 of a 4x2 matrix; feed 1,0,0,0,0,0,0
        T = explicit(["10", "01", "11", "01"])
        s = StreamState(T)
        emitted = [s.push(b) for b in [1, 0, 0, 0]]
        assert emitted == [[], [], [], []]
        assert s.V == BitVec.from_str("10")
        assert s.push(0) == []  # bits_in = 5: floor(1*2/4) = 0
        assert s.push(0) == [1]  # bits_in = 6: floor(2*2/4) = 1, component 0 of V
        assert s.push(0) == []
        assert s.push(0) == [0]  # component 1
        assert (s.bits_in, s.bits_out) == (8, 2)

    def test_zero_stream(self):
        s = StreamState(gen_uniform(16, 8, 3))
        out = s.push_bits(np.zeros(1000, dtype=np.uint8))
        assert not out.any() and s.V == BitVec.zeros(8)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 24), st.data())
    def test_matches_reference(self, n, data):
        m = data.draw(st.integers(1, n))
        T = gen_uniform(n, m, data.draw(st.integers(0, 1000)))
        bits = np.array(data.draw(st.lists(st.integers(0, 1), max_size=300)), dtype=np.uint8)
        M = T.matrix.to_bits()
        for mode in Mode:
            got = StreamState(T, mode).push_bits(bits).tolist()
            assert got == reference_stream(M, bits.tolist(), accumulate=mode is Mode.ACCUMULATE)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(1, 50), min_size=1, max_size=12), st.sampled_from(list(Mode)))
    def test_push_granularity(self, cuts, mode):
        T = gen_sparse(13, 5, 0.3, 8)
        bits = np.random.default_rng(1).integers(0, 2, sum(cuts)).astype(np.uint8)
        whole = StreamState(T, mode).push_bits(bits)
        s = StreamState(T, mode)
        parts, pos = [], 0
        for c in cuts:
            parts.append(s.push_bits(bits[pos : pos + c]))
            pos += c
        assert np.array_equal(np.concatenate(parts), whole)

    def test_block_mode_equals_block_extraction(self, rng):
        T = gen_sparse(32, 12, 0.2, 6)
        X = rng.integers(0, 2, (50, 32)).astype(np.uint8)
        out = StreamState(T, "block").push_bits(X.reshape(-1)).reshape(50, 12)
        assert np.array_equal(out, extract_blocks(T, X))

    @pytest.mark.parametrize("n,m", [(8, 3), (16, 16), (10, 1), (64, 20)])
    def test_rate_law(self, n, m, rng):
        s = StreamState(gen_uniform(n, m, 0))
        for L in range(0, 5 * n):
            s.push_bits(rng.integers(0, 2, n if L == 0 else 1).astype(np.uint8))
            assert s.bits_out == (L * m) // n

    def test_accumulator_never_resets(self, rng):
        T = gen_uniform(12, 5, 9)
        X = rng.integers(0, 2, (8, 12)).astype(np.uint8)
        s = StreamState(T)
        acc = np.zeros(5, dtype=np.uint8)
        for c in range(8):
            s.push_bits(X[c])
            acc ^= extract_blocks(T, X[c : c + 1])[0]
            assert s.V.to_bits().tolist() == acc.tolist()


class TestBench:
    def test_report(self):
        T = gen_fixed_column_weight(256, 128, 4, 0)
        rep = stream_throughput_bench(T, 200_000, 1)
        assert rep.input_bits == 200_000
        assert rep.output_bits == (200_000 - 256) * 128 // 256
        assert rep.input_rate > 0 and rep.output_rate > 0
        assert rep.ones_per_row == pytest.approx(4 * 128 / 256)

    def test_empty(self):
        rep = stream_throughput_bench(gen_uniform(8, 4, 0), 0, 1)
        assert rep.input_rate is None and rep.output_rate is None and rep.output_bits == 0

    def test_sparse_faster_than_dense(self):
        n, m, L = 1024, 512, 4_000_000
        sparse = stream_throughput_bench(gen_fixed_column_weight(n, m, 16, 0), L, 0)
        dense = stream_throughput_bench(gen_uniform(n, m, 0), L, 0)
        assert sparse.input_rate > dense.input_rate
