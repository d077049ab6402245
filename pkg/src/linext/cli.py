"""Command-line entry point.

Machine-readable output (JSON, CSV) goes to stdout or ``--out``; human
summaries go to stderr.  Failures print one line to stderr of the form
``linext: error[<code>]: <message>`` and exit with

===  ===============================================
0    success
2    usage: bad flags, missing files, unsupported mode
3    capacity guard exceeded
4    invalid input: malformed file, spec, or dimensions
===  ===============================================
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import bitfile
from .errors import CapacityError, LinextError, UnsupportedModelError
from .extract import Mode, StreamState, extract_blocks, stream_throughput_bench
from .gf2 import BitMatrix
from .matgen import (
    TransformMatrix,
    bch_generator,
    gen_fixed_column_weight,
    gen_sparse,
    gen_uniform,
    load_matrix,
    poly_str,
    save_matrix,
    weight_distribution,
)
from .sources import load_spec, min_entropy, sample_many, spec_to_dict
from .verify import (
    MC_MAX_M,
    bitfixing_rho_for,
    bound_report,
    exact_distribution,
    mc_rho,
    rho,
    rho_bruteforce,
)

DEFAULT_SEED = 2011

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_INVALID = 4


class UsageError(Exception):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.generic):
        return _json_safe(obj.item())
    return obj


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(_json_safe(obj), indent=2, allow_nan=False) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _existing(path: str) -> str:
    if not Path(path).exists() or Path(path).is_dir():
        raise UsageError(f"no such file: {path}")
    return path


def _matrix_meta(T: TransformMatrix) -> dict:
    d = {"kind": T.kind.value, "n": T.n, "m": T.m, "ones": T.matrix.popcount()}
    if T.density is not None:
        d["density"] = T.density
    if T.seed is not None:
        d["seed"] = T.seed
    if T.column_weight is not None:
        d["column_weight"] = T.column_weight
    if T.bch_params is not None:
        d["kappa"], d["t"] = T.bch_params
        d["g"] = poly_str(T.generator_poly)
    return d


# genmat


def cmd_genmat(args) -> int:
    kind = args.kind
    m = args.m if args.m is not None else args.n
    if kind == "bch":
        if args.kappa is None or args.t is None:
            raise UsageError("genmat --kind bch needs --kappa and --t")
        T = bch_generator(args.kappa, args.t)
    else:
        if args.n is None:
            raise UsageError(f"genmat --kind {kind} needs --n")
        if kind == "uniform":
            T = gen_uniform(args.n, m, args.seed)
        elif kind == "sparse":
            T = gen_sparse(args.n, m, args.density, args.seed)
        elif kind == "fcw":
            if args.column_weight is None:
                raise UsageError("genmat --kind fcw needs --column-weight")
            T = gen_fixed_column_weight(args.n, m, args.column_weight, args.seed)
        else:
            if m != args.n:
                raise UsageError("identity matrix is square; omit --m or set it equal to --n")
            T = TransformMatrix.explicit(BitMatrix.identity(args.n))
    save_matrix(T, args.out)
    _note(f"wrote {T.n}x{T.m} {T.kind.value} matrix to {args.out}")
    _emit(_matrix_meta(T))
    return EXIT_OK


# source


def cmd_source_gen(args) -> int:
    spec = load_spec(_existing(args.spec))
    if args.len is not None:
        count = -(-args.len // spec.n)
        bits = sample_many(spec, count, args.seed).reshape(-1)[: args.len]
    else:
        count = args.count
        bits = sample_many(spec, count, args.seed).reshape(-1)
    bitfile.write_bits(args.out, bits)
    _note(f"wrote {bits.size} bits ({count} samples of {spec.n}) to {args.out}")
    _emit({"model": spec_to_dict(spec)["model"], "n": spec.n, "count": count, "bits": int(bits.size), "seed": args.seed})
    return EXIT_OK


def cmd_source_info(args) -> int:
    spec = load_spec(_existing(args.spec))
    d = {"model": spec_to_dict(spec)["model"], "n": spec.n}
    try:
        d["hmin"] = min_entropy(spec)
    except UnsupportedModelError as exc:
        d["hmin"] = None
        d["hmin_note"] = str(exc)
    _emit(d)
    return EXIT_OK


# extract


def cmd_extract(args) -> int:
    T = load_matrix(_existing(args.matrix))
    x = bitfile.read_bits(_existing(args.input), args.bits)
    if args.stream is None:
        blocks = x.size // T.n
        y = extract_blocks(T, x[: blocks * T.n].reshape(blocks, T.n)).reshape(-1)
        mode = "blocks"
    else:
        state = StreamState(T, args.stream)
        y = state.push_bits(x)
        mode = args.stream
    bitfile.write_bits(args.out, y)
    _note(f"{mode}: {x.size} bits in, {y.size} bits out -> {args.out}")
    _emit({"mode": mode, "n": T.n, "m": T.m, "input_bits": int(x.size), "output_bits": int(y.size)})
    return EXIT_OK


# verify / bound


def cmd_verify(args) -> int:
    T = load_matrix(_existing(args.matrix))
    spec = load_spec(_existing(args.spec))
    t0 = time.perf_counter()
    report: dict = {"mode": args.mode, "n": T.n, "m": T.m}
    if args.mode == "exact":
        report["rho"] = rho(exact_distribution(T, spec))
    elif args.mode == "oracle":
        report["rho"] = rho_bruteforce(T, spec)
    elif args.mode == "bitfixing":
        report["rho"] = bitfixing_rho_for(T, spec)
    else:
        if T.m > MC_MAX_M:
            raise CapacityError("m", T.m, MC_MAX_M)
        N = args.samples if args.samples is not None else max(100 << T.m, 100_000)
        est = mc_rho(T, spec, N, args.seed)
        report.update(rho=est.estimate, ci_low=est.ci_low, ci_high=est.ci_high, samples=N, seed=args.seed)
    report["bounds"] = bound_report(spec, T).as_dict()["bounds"]
    report["runtime_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
    _note(f"rho = {report['rho']:.6g} ({args.mode})")
    _emit(report, args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    spec = load_spec(_existing(args.spec)) if args.spec else None
    T = load_matrix(_existing(args.matrix)) if args.matrix else None
    rep = bound_report(spec, T, model=args.model, n=args.n, m=args.m, hmin=args.hmin, e=args.e, k=args.k)
    for name, b in rep.items():
        _note(f"{name:20s} " + (f"2^{b.log2:.4f} = {b.display()}" if b.log2 is not None else f"n/a ({b.note})"))
    _emit(rep.as_dict(), args.out)
    return EXIT_OK


# bch / wdist / bench


def cmd_bch_info(args) -> int:
    T = bch_generator(args.kappa, args.t)
    g = T.generator_poly
    d = {"kappa": args.kappa, "t": args.t, "n": T.n, "m": T.m, "g": poly_str(g), "deg_g": g.bit_length() - 1, "designed_distance": 2 * args.t + 1}
    if T.m <= 20:
        d["min_weight"] = weight_distribution(T).min_nonzero_weight()
    _emit(d)
    return EXIT_OK


def cmd_wdist(args) -> int:
    T = load_matrix(_existing(args.matrix))
    wd = weight_distribution(T, samples=args.samples, seed=args.seed)
    _note(f"{wd.mode} weight distribution over {wd.total} inputs; min nonzero weight {wd.min_nonzero_weight()}")
    if args.out:
        wd.write(args.out)
    else:
        sys.stdout.write(wd.to_csv())
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.matrix:
        T = load_matrix(_existing(args.matrix))
    elif args.n is not None and args.m is not None:
        if args.column_weight is not None:
            T = gen_fixed_column_weight(args.n, args.m, args.column_weight, args.seed)
        else:
            T = gen_uniform(args.n, args.m, args.seed)
    else:
        raise UsageError("bench needs --matrix or --n and --m")
    rep = stream_throughput_bench(T, args.bits, args.seed)
    if rep.input_rate is not None:
        _note(f"{rep.input_rate / 1e6:.2f} Mbit/s in, {rep.output_rate / 1e6:.2f} Mbit/s out")
    _emit(rep.as_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="linext", description="Linear-transformation randomness extraction toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def seed(q):
        q.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"generation seed (default {DEFAULT_SEED})")

    q = sub.add_parser("genmat", help="generate a transformation matrix")
    q.add_argument("--kind", required=True, choices=["uniform", "sparse", "fcw", "bch", "identity"])
    q.add_argument("--n", type=int)
    q.add_argument("--m", type=int)
    q.add_argument("--density", type=float, help="sparse entry probability (default min(1/2, log2(n)^2/n))")
    q.add_argument("--column-weight", type=int)
    q.add_argument("--kappa", type=int)
    q.add_argument("--t", type=int)
    q.add_argument("--out", required=True)
    seed(q)
    q.set_defaults(func=cmd_genmat)

    src = sub.add_parser("source", help="source spec utilities")
    ssub = src.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = ssub.add_parser("gen", help="sample a source into a bits file")
    q.add_argument("--spec", required=True)
    size = q.add_mutually_exclusive_group()
    size.add_argument("--count", type=int, default=1, help="number of n-bit samples (default 1)")
    size.add_argument("--len", type=int, help="total bits; the last sample is truncated if needed")
    q.add_argument("--out", required=True)
    seed(q)
    q.set_defaults(func=cmd_source_gen)
    q = ssub.add_parser("info", help="report min-entropy of a spec")
    q.add_argument("--spec", required=True)
    q.set_defaults(func=cmd_source_info)

    q = sub.add_parser("extract", help="apply a matrix to a bits file")
    q.add_argument("--matrix", required=True)
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--stream", choices=[m.value for m in Mode], help="streaming mode; omit for whole blocks")
    q.add_argument("--bits", type=int, help="number of input bits to read (default: whole file)")
    q.set_defaults(func=cmd_extract)

    q = sub.add_parser("verify", help="compute rho(Y) for a matrix and source")
    q.add_argument("mode", choices=["exact", "oracle", "mc", "bitfixing"])
    q.add_argument("--matrix", required=True)
    q.add_argument("--spec", required=True)
    q.add_argument("--samples", type=int)
    q.add_argument("--out")
    seed(q)
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("bound", help="evaluate closed-form bounds")
    q.add_argument("--spec")
    q.add_argument("--matrix")
    q.add_argument("--model", choices=[
        "independent", "bounded_bias", "markov1", "oblivious_bit_fixing", "nonoblivious_bit_fixing", "linear_subspace",
    ])
    q.add_argument("--n", type=int)
    q.add_argument("--m", type=int)
    q.add_argument("--hmin", type=float)
    q.add_argument("--e", type=float)
    q.add_argument("--k", type=int)
    q.add_argument("--out")
    q.set_defaults(func=cmd_bound)

    bch = sub.add_parser("bch", help="BCH code utilities")
    bsub = bch.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = bsub.add_parser("info", help="report BCH parameters and generator polynomial")
    q.add_argument("--kappa", type=int, required=True)
    q.add_argument("--t", type=int, required=True)
    q.set_defaults(func=cmd_bch_info)

    q = sub.add_parser("wdist", help="weight distribution of matrix images as CSV")
    q.add_argument("--matrix", required=True)
    q.add_argument("--samples", type=int, default=100_000)
    q.add_argument("--out")
    seed(q)
    q.set_defaults(func=cmd_wdist)

    q = sub.add_parser("bench", help="streaming throughput")
    q.add_argument("--matrix")
    q.add_argument("--n", type=int)
    q.add_argument("--m", type=int)
    q.add_argument("--column-weight", type=int)
    q.add_argument("--bits", type=int, default=10_000_000)
    seed(q)
    q.set_defaults(func=cmd_bench)
    return p


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, CapacityError):
        return EXIT_CAPACITY
    if isinstance(exc, (UsageError, UnsupportedModelError)):
        return EXIT_USAGE
    return EXIT_INVALID


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, LinextError) as exc:
        err, code = exc, exc.code
    except OSError as exc:
        err, code = UsageError(str(exc)), "io"
    print(f"linext: error[{code}]: {err}", file=sys.stderr)
    return _exit_code(err)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
