import json
import subprocess
import sys

import numpy as np
import pytest

from linext import bitfile
from linext.cli import DEFAULT_SEED, run
from linext.matgen import bch_generator, load_matrix, save_matrix, to_bytes


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def write_spec(path, d):
    path.write_text(json.dumps(d))
    return path


class TestDocumentedExamples:
    def test_bch_info(self, capsys):
        d = call_json(capsys, "bch", "info", "--kappa", 4, "--t", 2)
        assert (d["n"], d["m"], d["g"]) == (15, 7, "111010001")
        assert d["min_weight"] == 5

    def test_bound_ramp512(self, capsys):
        d = call_json(capsys, "bound", "--hmin", 226.16, "--m", 180, "--n", 512, "--model", "independent")
        assert d["uniform_expectation_log2"] == pytest.approx(-47.16, abs=1e-9)
        assert d["bounds"]["uniform_expectation"]["display"] == "6.4e-15"

    def test_extract_identity(self, capsys, tmp_path):
        call_json(capsys, "genmat", "--kind", "identity", "--n", 4, "--out", tmp_path / "id4.bin")
        bitfile.write_bits(tmp_path / "x.bin", np.array([1, 0, 1, 1]))
        d = call_json(capsys, "extract", "--matrix", tmp_path / "id4.bin", "--in", tmp_path / "x.bin", "--out", tmp_path / "y.bin", "--bits", 4)
        assert d["output_bits"] == 4
        assert bitfile.read_bits(tmp_path / "y.bin", 4).tolist() == [1, 0, 1, 1]


class TestSubcommands:
    @pytest.mark.parametrize(
        "args",
        [
            ["--kind", "uniform", "--n", 16, "--m", 8],
            ["--kind", "sparse", "--n", 16, "--m", 8, "--density", 0.2],
            ["--kind", "fcw", "--n", 16, "--m", 8, "--column-weight", 3],
            ["--kind", "bch", "--kappa", 4, "--t", 1],
        ],
    )
    def test_genmat(self, capsys, tmp_path, args):
        d = call_json(capsys, "genmat", *args, "--out", tmp_path / "m.bin")
        T = load_matrix(tmp_path / "m.bin")
        assert (d["n"], d["m"]) == (T.n, T.m)
        if "seed" in d:
            assert d["seed"] == DEFAULT_SEED

    def test_source_gen_len(self, capsys, tmp_path):
        spec = write_spec(tmp_path / "s.json", {"model": "independent", "biases": [1, 0, 1]})
        d = call_json(capsys, "source", "gen", "--spec", spec, "--len", 7, "--out", tmp_path / "x.bin")
        assert d["bits"] == 7 and d["count"] == 3
        assert bitfile.read_bits(tmp_path / "x.bin", 7).tolist() == [1, 0, 1, 1, 0, 1, 1]

    def test_source_info(self, capsys, tmp_path):
        spec = write_spec(tmp_path / "s.json", {"model": "markov1", "n": 8, "eps": 0.2})
        d = call_json(capsys, "source", "info", "--spec", spec)
        assert d["hmin"] is None and "hmin_note" in d

    def test_stream_modes(self, capsys, tmp_path):
        call_json(capsys, "genmat", "--kind", "uniform", "--n", 8, "--m", 4, "--out", tmp_path / "m.bin")
        bits = np.random.default_rng(0).integers(0, 2, 80)
        bitfile.write_bits(tmp_path / "x.bin", bits)
        blk = call_json(capsys, "extract", "--matrix", tmp_path / "m.bin", "--in", tmp_path / "x.bin", "--out", tmp_path / "b.bin", "--stream", "block")
        whole = call_json(capsys, "extract", "--matrix", tmp_path / "m.bin", "--in", tmp_path / "x.bin", "--out", tmp_path / "w.bin")
        acc = call_json(capsys, "extract", "--matrix", tmp_path / "m.bin", "--in", tmp_path / "x.bin", "--out", tmp_path / "a.bin", "--stream", "accumulate")
        assert blk["output_bits"] == whole["output_bits"] == 40
        assert (tmp_path / "b.bin").read_bytes() == (tmp_path / "w.bin").read_bytes()
        assert acc["output_bits"] == (80 - 8) * 4 // 8

    @pytest.mark.parametrize("mode", ["exact", "oracle", "mc", "bitfixing"])
    def test_verify_modes(self, capsys, tmp_path, mode):
        call_json(capsys, "genmat", "--kind", "sparse", "--n", 12, "--m", 4, "--out", tmp_path / "m.bin")
        spec = write_spec(tmp_path / "s.json", {"model": "nonoblivious_bit_fixing", "k": 6, "n": 12, "seed": 1})
        d = call_json(capsys, "verify", mode, "--matrix", tmp_path / "m.bin", "--spec", spec, "--samples", 20000)
        assert d["mode"] == mode
        assert set(d) >= {"rho", "bounds", "mode", "runtime_ms"}
        for b in d["bounds"].values():
            assert set(b) >= {"log2", "applicable"}
        assert d["bounds"]["bitfixing_prob"]["log2"] == 4 - 6

    def test_verify_modes_agree(self, capsys, tmp_path):
        call_json(capsys, "genmat", "--kind", "uniform", "--n", 10, "--m", 5, "--out", tmp_path / "m.bin")
        spec = write_spec(tmp_path / "s.json", {"model": "bounded_bias", "n": 10, "e": 0.3})
        a = call_json(capsys, "verify", "exact", "--matrix", tmp_path / "m.bin", "--spec", spec)
        b = call_json(capsys, "verify", "oracle", "--matrix", tmp_path / "m.bin", "--spec", spec)
        assert a["rho"] == pytest.approx(b["rho"], abs=1e-12)

    def test_bound_from_files(self, capsys, tmp_path):
        save_matrix(bch_generator(4, 2), tmp_path / "g.bin")
        spec = write_spec(tmp_path / "s.json", {"model": "bounded_bias", "n": 15, "e": 0.1})
        d = call_json(capsys, "bound", "--spec", spec, "--matrix", tmp_path / "g.bin")
        assert d["bch_log2"] == pytest.approx(-6.937, abs=5e-4)
        assert d["fourier_log2"] < d["bch_log2"]

    def test_wdist(self, capsys, tmp_path):
        save_matrix(bch_generator(4, 2), tmp_path / "g.bin")
        code, out, _ = call(capsys, "wdist", "--matrix", tmp_path / "g.bin")
        assert code == 0
        assert out.splitlines()[0] == "weight,count,binomial_reference,relative_deviation"
        assert out.splitlines()[6].startswith("5,18,")

    def test_bench(self, capsys):
        d = call_json(capsys, "bench", "--n", 256, "--m", 128, "--column-weight", 4, "--bits", 100000)
        assert d["input_bits"] == 100000 and d["input_rate"] > 0


class TestErrors:
    def test_unknown_subcommand(self, capsys):
        code, _, err = call(capsys, "frobnicate")
        assert code == 2
        assert err.startswith("linext: error[usage]:") and err.count("\n") == 1

    def test_unknown_flag(self, capsys):
        assert call(capsys, "bch", "info", "--kappa", 4, "--t", 2, "--bogus")[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = call(capsys, "verify", "exact", "--matrix", tmp_path / "nope.bin", "--spec", tmp_path / "s.json")
        assert code == 2 and "error[usage]" in err

    def test_capacity(self, capsys, tmp_path):
        call_json(capsys, "genmat", "--kind", "uniform", "--n", 40, "--m", 30, "--out", tmp_path / "m.bin")
        spec = write_spec(tmp_path / "s.json", {"model": "bounded_bias", "n": 40, "e": 0.1})
        code, _, err = call(capsys, "verify", "exact", "--matrix", tmp_path / "m.bin", "--spec", spec)
        assert code == 3 and "error[capacity]" in err and "26" in err

    def test_malformed_matrix(self, capsys, tmp_path):
        (tmp_path / "m.bin").write_bytes(b"not a matrix at all")
        spec = write_spec(tmp_path / "s.json", {"model": "bounded_bias", "n": 4, "e": 0.1})
        code, _, err = call(capsys, "verify", "exact", "--matrix", tmp_path / "m.bin", "--spec", spec)
        assert code == 4 and "error[format]" in err

    def test_invalid_spec(self, capsys, tmp_path):
        spec = write_spec(tmp_path / "s.json", {"model": "independent", "biases": [0.5, 3]})
        code, _, err = call(capsys, "source", "info", "--spec", spec)
        assert code == 4 and "error[invalid]" in err

    def test_dimension(self, capsys, tmp_path):
        call_json(capsys, "genmat", "--kind", "identity", "--n", 4, "--out", tmp_path / "m.bin")
        spec = write_spec(tmp_path / "s.json", {"model": "bounded_bias", "n": 5, "e": 0.1})
        code, _, err = call(capsys, "verify", "exact", "--matrix", tmp_path / "m.bin", "--spec", spec)
        assert code == 4 and "error[dimension]" in err

    def test_generator_precondition(self, capsys, tmp_path):
        code, _, err = call(capsys, "genmat", "--kind", "uniform", "--n", 4, "--m", 5, "--out", tmp_path / "m.bin")
        assert code == 4

    def test_unsupported_mode(self, capsys, tmp_path):
        call_json(capsys, "genmat", "--kind", "identity", "--n", 4, "--out", tmp_path / "m.bin")
        spec = write_spec(tmp_path / "s.json", {"model": "bounded_bias", "n": 4, "e": 0.1})
        code, _, err = call(capsys, "verify", "bitfixing", "--matrix", tmp_path / "m.bin", "--spec", spec)
        assert code == 2 and "error[unsupported]" in err


def _pipeline(capsys, d):
    call_json(capsys, "genmat", "--kind", "sparse", "--n", 16, "--m", 6, "--seed", 42, "--out", d / "m.bin")
    spec = write_spec(d / "s.json", {"model": "bounded_bias", "n": 16, "e": 0.2})
    call_json(capsys, "source", "gen", "--spec", spec, "--count", 500, "--seed", 43, "--out", d / "x.bin")
    call_json(capsys, "extract", "--matrix", d / "m.bin", "--in", d / "x.bin", "--out", d / "y.bin", "--stream", "accumulate")
    for mode in ("exact", "mc"):
        assert call(capsys, "verify", mode, "--matrix", d / "m.bin", "--spec", spec, "--samples", 10000, "--seed", 44, "--out", d / f"{mode}.json")[0] == 0


def test_pipeline_reproducible(capsys, tmp_path):
    runs = [tmp_path / "a", tmp_path / "b"]
    for d in runs:
        d.mkdir()
        _pipeline(capsys, d)
    for name in ("m.bin", "x.bin", "y.bin"):
        assert (runs[0] / name).read_bytes() == (runs[1] / name).read_bytes()
    for name in ("exact.json", "mc.json"):
        a, b = (json.loads((d / name).read_text()) for d in runs)
        a.pop("runtime_ms"), b.pop("runtime_ms")
        assert a == b


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "linext", "bch", "info", "--kappa", "2", "--t", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["g"] == "111"


def test_matrix_file_is_header_plus_rows(capsys, tmp_path):
    call_json(capsys, "genmat", "--kind", "bch", "--kappa", 4, "--t", 2, "--out", tmp_path / "g.bin")
    assert (tmp_path / "g.bin").read_bytes() == to_bytes(bch_generator(4, 2))
