"""Command line front end: one subcommand per kernel.

Exit status: 0 ok, 1 comparison mismatch, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import io
from .cordic import CordicConfig, cart2pol, rotate
from .filters import FIR11_TAPS, COEF_FORMAT, fir_block, fixed_taps
from .fixed import FixedFormat, quantize
from .huffman import huffman_encoding
from .image import Kernel3x3, filter2d_boundary_constant, filter2d_linebuffer, filter2d_naive
from .linalg import blocked_matmul_full, matmul, spmv
from .perfmodel import LoopSpec, loop_latency, throughput_hz
from .receiver import ofdm_roundtrip, phase_detect
from .scan import histogram, histogram_mapreduce, prefix_sum
from .sort import cell_sort, insertion_sort, merge_sort, merge_sort_parallel
from .transforms import dft, fft, ifft

GEN_KINDS = ("uniform", "impulse", "step", "chirp", "symbols")


class UsageError(Exception):
    pass


def _emit(args, values) -> int:
    """Write/print ``values`` and run the optional golden comparison."""
    text = io.dat_text(values)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if getattr(args, "csv", None):
        io.write_csv(args.csv, values)
    if getattr(args, "compare", None):
        gold = io.read_dat(args.compare)
        got = np.asarray(values)
        if got.shape != gold.shape:
            print(f"compare: length {got.size} vs gold {gold.size}", file=sys.stderr)
            return 1
        diff = float(np.max(np.abs(got - gold))) if got.size else 0.0
        print(f"max abs diff: {diff:.6g}", file=sys.stderr)
        return 0 if diff <= args.tol else 1
    return 0


def _fmt(args):
    return FixedFormat.parse(args.fixed) if getattr(args, "fixed", None) else None


def cmd_fir(args):
    taps = io.read_dat(args.taps) if args.taps else np.asarray(FIR11_TAPS, dtype=float)
    x = io.read_dat(args.inp)
    fmt = _fmt(args)
    if fmt is None:
        return _emit(args, fir_block(list(taps), list(x), zero=0.0))
    c = fixed_taps(taps, COEF_FORMAT)
    xs = [quantize(float(v), fmt) for v in x]
    y = fir_block(c, xs, zero=quantize(0.0, fmt))
    return _emit(args, [float(v) for v in y])


def cmd_cordic(args):
    cfg = CordicConfig(args.iters, not args.no_compensation, _fmt(args))
    if args.mode == "sincos":
        if args.theta is None:
            raise UsageError("sincos needs --theta")
        res = rotate(args.theta, cfg)
        vals = [float(res.x), float(res.y)]
        print(f"cos={vals[0]!r} sin={vals[1]!r} angle={float(res.angle)!r}")
    else:
        if args.x is None or args.y is None:
            raise UsageError("cart2pol needs --x and --y")
        p = cart2pol(args.x, args.y, cfg)
        vals = [p.r, p.theta]
        print(f"r={p.r!r} theta={p.theta!r}")
    if args.out:
        io.write_dat(args.out, vals)
    return 0


def cmd_dft(args):
    return _emit(args, dft(io.read_dat(args.inp)))


def cmd_fft(args):
    x = io.read_dat(args.inp)
    if args.n is not None and len(x) != args.n:
        raise UsageError(f"--n {args.n} but input has {len(x)} samples")
    return _emit(args, ifft(x) if args.inverse else fft(x))


def cmd_spmv(args):
    return _emit(args, spmv(io.read_crs(args.matrix), list(io.read_dat(args.x))))


def cmd_matmul(args):
    res = matmul(io.read_matrix(args.a), io.read_matrix(args.b))
    return _emit_matrix(args, res)


def cmd_blockmm(args):
    stats = {}
    res = blocked_matmul_full(io.read_matrix(args.a), io.read_matrix(args.b), args.block, stats)
    print(f"calls={stats['calls']} a_reads={stats['a_reads']} b_reads={stats['b_reads']}", file=sys.stderr)
    return _emit_matrix(args, res)


def _emit_matrix(args, m):
    if args.out:
        io.write_matrix(args.out, m)
    else:
        sys.stdout.write("".join(" ".join(io.format_value(v) for v in r) + "\n" for r in m))
    if args.compare:
        gold = np.asarray(io.read_matrix(args.compare), dtype=float)
        got = np.asarray(m, dtype=float)
        if gold.shape != got.shape:
            return 1
        diff = float(np.max(np.abs(gold - got))) if got.size else 0.0
        print(f"max abs diff: {diff:.6g}", file=sys.stderr)
        return 0 if diff <= args.tol else 1
    return 0


def cmd_prefixsum(args):
    return _emit(args, prefix_sum(io.read_ints(args.inp)))


def cmd_histogram(args):
    xs = io.read_ints(args.inp)
    if args.num_pe > 1:
        return _emit(args, histogram_mapreduce(xs, args.bins, args.num_pe))
    return _emit(args, histogram(xs, args.bins))


def cmd_sort(args):
    a = list(io.read_dat(args.inp))
    if args.algo == "insertion":
        insertion_sort(a)
    elif args.algo == "cells":
        a = cell_sort(a)
    elif args.algo == "merge":
        merge_sort(a)
    else:
        a = merge_sort_parallel(a)
    return _emit(args, a)


def cmd_huffman(args):
    freqs = io.read_ints(args.freqs)
    if len(freqs) > 256:
        raise UsageError("frequency file must hold at most 256 entries")
    freqs += [0] * (256 - len(freqs))
    enc, n = huffman_encoding(freqs)
    text = "".join(f"{e}\n" for e in enc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"symbols={n}", file=sys.stderr)
    if args.gold:
        same = Path(args.gold).read_text(encoding="utf-8") == text
        print("gold: match" if same else "gold: MISMATCH", file=sys.stderr)
        return 0 if same else 1
    return 0


def cmd_filter2d(args):
    toks = Path(args.kernel).read_text(encoding="utf-8").split()
    if len(toks) not in (9, 10):
        raise UsageError("kernel file needs 9 coefficients and an optional divisor")
    k = Kernel3x3(tuple(int(t) for t in toks[:9]), int(toks[9]) if len(toks) == 10 else 1)
    frame = io.read_ppm(args.inp)
    if args.boundary == "constant":
        out = filter2d_boundary_constant(frame, k)
    elif args.mode == "naive":
        out = filter2d_naive(frame, k)
    else:
        out = filter2d_linebuffer(frame, k)
    io.write_ppm(args.out, out)
    if args.compare:
        gold = io.read_ppm(args.compare)
        diff = int(np.max(np.abs(gold.astype(int) - out.astype(int)))) if gold.shape == out.shape else 256
        print(f"max abs diff: {diff}", file=sys.stderr)
        return 0 if diff <= args.tol else 1
    return 0


def cmd_ofdm(args):
    syms = io.read_ints(args.symbols)
    rec = ofdm_roundtrip(syms, args.snr, args.seed, n=len(syms))
    errors = sum(a != b for a, b in zip(syms, rec))
    print(f"symbol errors: {errors}/{len(syms)}", file=sys.stderr)
    return _emit(args, rec)


def cmd_phasedetect(args):
    i, q = io.read_dat(args.i), io.read_dat(args.q)
    if len(i) != len(q):
        raise UsageError("I and Q files differ in length")
    taps = io.read_dat(args.taps)
    out = phase_detect(list(i + 1j * q), taps, CordicConfig(args.iters))
    text = "".join(f"{p.r!r} {p.theta!r}\n" for p in out)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_perf(args):
    spec = LoopSpec(args.n, args.il, args.ii, args.pipelined)
    cyc = loop_latency(spec)
    per = args.ii if args.pipelined else args.il
    print(f"latency_cycles={cyc}")
    print(f"throughput_hz={throughput_hz(args.clock_ns, per)!r}")
    return 0


def generate(kind: str, n: int, seed: int = 0) -> np.ndarray:
    if kind not in GEN_KINDS:
        raise UsageError(f"unknown kind {kind!r}")
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        return rng.uniform(-1.0, 1.0, n)
    if kind == "impulse":
        x = np.zeros(n)
        if n:
            x[0] = 1.0
        return x
    if kind == "step":
        return np.ones(n)
    if kind == "chirp":
        t = np.arange(n)
        # frequency sweeps linearly from 0 to half the sample rate
        return np.cos(np.pi * t * t / (2 * max(n, 1)))
    return rng.integers(0, 4, n)


def cmd_gen(args):
    return _emit(args, generate(args.kind, args.n, args.seed))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="streamkern", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, inp=True, compare=True, out_required=False):
        sp = sub.add_parser(name)
        sp.set_defaults(fn=fn)
        if inp:
            sp.add_argument("--in", dest="inp", required=True)
        sp.add_argument("--out", required=out_required)
        if compare:
            sp.add_argument("--compare")
            sp.add_argument("--tol", type=float, default=1e-9)
            sp.add_argument("--csv", help="also write index,value[,imag] CSV")
        return sp

    sp = add("fir", cmd_fir)
    sp.add_argument("--taps")
    sp.add_argument("--fixed", help="sample format W,I")

    sp = sub.add_parser("cordic")
    sp.set_defaults(fn=cmd_cordic)
    sp.add_argument("mode", choices=("sincos", "cart2pol"))
    sp.add_argument("--theta", type=float)
    sp.add_argument("--x", type=float)
    sp.add_argument("--y", type=float)
    sp.add_argument("--iters", type=int, default=16)
    sp.add_argument("--fixed")
    sp.add_argument("--no-compensation", action="store_true")
    sp.add_argument("--out")

    add("dft", cmd_dft)
    sp = add("fft", cmd_fft)
    sp.add_argument("--n", type=int)
    sp.add_argument("--inverse", action="store_true")

    sp = add("spmv", cmd_spmv, inp=False)
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--x", required=True)

    for name, fn in (("matmul", cmd_matmul), ("blockmm", cmd_blockmm)):
        sp = add(name, fn, inp=False)
        sp.add_argument("--a", required=True)
        sp.add_argument("--b", required=True)
        if name == "blockmm":
            sp.add_argument("--block", type=int, default=2)

    add("prefixsum", cmd_prefixsum)
    sp = add("histogram", cmd_histogram)
    sp.add_argument("--bins", type=int, required=True)
    sp.add_argument("--num-pe", type=int, default=1)

    sp = add("sort", cmd_sort)
    sp.add_argument("--algo", choices=("insertion", "cells", "merge", "merge-parallel"), default="merge")

    sp = sub.add_parser("huffman")
    sp.set_defaults(fn=cmd_huffman)
    sp.add_argument("--freqs", required=True)
    sp.add_argument("--out")
    sp.add_argument("--gold")

    sp = add("filter2d", cmd_filter2d, compare=False, out_required=True)
    sp.add_argument("--kernel", required=True)
    sp.add_argument("--mode", choices=("linebuffer", "naive"), default="linebuffer")
    sp.add_argument("--boundary", choices=("black", "constant"), default="black")
    sp.add_argument("--compare")
    sp.add_argument("--tol", type=float, default=0)

    sp = add("ofdm", cmd_ofdm, inp=False)
    sp.add_argument("--symbols", required=True)
    sp.add_argument("--snr", type=float)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("phasedetect")
    sp.set_defaults(fn=cmd_phasedetect)
    sp.add_argument("--i", required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--taps", required=True, help=".dat taps, two columns for complex")
    sp.add_argument("--iters", type=int, default=16)
    sp.add_argument("--out")

    sp = sub.add_parser("perf")
    sp.set_defaults(fn=cmd_perf)
    sp.add_argument("what", choices=("loop",))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--il", type=int, required=True)
    sp.add_argument("--ii", type=int, default=1)
    sp.add_argument("--pipelined", action="store_true")
    sp.add_argument("--clock-ns", type=float, default=10.0)

    sp = add("gen", cmd_gen, inp=False)
    sp.add_argument("kind", choices=GEN_KINDS)
    sp.add_argument("--n", type=int, default=1024)
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
