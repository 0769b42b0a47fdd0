"""DFT, staged radix-2 FFT with bit-reversal, and inverse FFT.

Spectra are 1-D ``complex128`` arrays.  The forward kernel is ``e^{-j 2 pi k n / N}``.
FFT stages are out-of-place so each stage can be a separate dataflow task.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .stream import DataflowPipeline, Stream, feed


@dataclass(frozen=True)
class TwiddleTable:
    n: int
    cos_table: np.ndarray
    sin_table: np.ndarray

    @property
    def w(self) -> np.ndarray:
        """Forward twiddles ``cos - j sin`` for indices ``0..N/2-1``."""
        return self.cos_table - 1j * self.sin_table


@lru_cache(maxsize=32)
def twiddles(n: int) -> TwiddleTable:
    i = np.arange(max(n // 2, 1))
    c = np.cos(2 * np.pi * i / n)
    s = np.sin(2 * np.pi * i / n)
    c.flags.writeable = False
    s.flags.writeable = False
    return TwiddleTable(n, c, s)


@lru_cache(maxsize=32)
def _dft_row(n: int):
    # one full row S'[m] = e^{-j 2 pi m / N}, m = 0..N-1
    m = np.arange(n)
    return np.cos(2 * np.pi * m / n), np.sin(2 * np.pi * m / n)


def as_spectrum(x) -> np.ndarray:
    return np.asarray(x, dtype=np.complex128).reshape(-1)


def is_pow2(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _check_pow2(n: int):
    if not is_pow2(n):
        raise ValueError(f"length {n} is not a power of two")


def dft(sig) -> np.ndarray:
    """Direct O(N^2) transform reading coefficients from one stored row via ``(k*n) mod N``."""
    g = as_spectrum(sig)
    n = len(g)
    if n == 0:
        raise ValueError("empty signal")
    cos_row, sin_row = _dft_row(n)
    k = np.arange(n)
    idx = np.outer(k, k) % n
    return (cos_row[idx] - 1j * sin_row[idx]) @ g


def bit_reverse_index(i: int, bits: int) -> int:
    if not 0 <= i < (1 << bits):
        raise ValueError(f"index {i} does not fit in {bits} bits")
    r = 0
    for _ in range(bits):
        r = (r << 1) | (i & 1)
        i >>= 1
    return r


def bit_reverse_permute(sig: np.ndarray) -> None:
    """Swap each element with its bit-reversed partner, in place."""
    n = len(sig)
    _check_pow2(n)
    bits = n.bit_length() - 1
    for i in range(n):
        r = bit_reverse_index(i, bits)
        if i < r:
            sig[i], sig[r] = sig[r], sig[i]


def fft_stage(sig, stage: int) -> np.ndarray:
    """Butterflies of one stage (span ``2**stage``) on an already bit-reversed input."""
    x = as_spectrum(sig)
    n = len(x)
    _check_pow2(n)
    levels = n.bit_length() - 1
    if not 1 <= stage <= levels:
        raise ValueError(f"stage {stage} outside 1..{levels}")
    span = 1 << stage
    half = span // 2
    w = twiddles(n).w[:: n // span][:half]
    blocks = x.reshape(-1, span)
    top = blocks[:, :half]
    bot = blocks[:, half:] * w
    return np.concatenate([top + bot, top - bot], axis=1).reshape(-1)


def fft(sig) -> np.ndarray:
    x = as_spectrum(sig).copy()
    _check_pow2(len(x))
    bit_reverse_permute(x)
    for s in range(1, len(x).bit_length()):
        x = fft_stage(x, s)
    return x


def fft_triple_loop(sig) -> np.ndarray:
    """Reference form: explicit stage/butterfly/group loops, computing twiddles on the fly."""
    x = as_spectrum(sig).copy()
    n = len(x)
    _check_pow2(n)
    bit_reverse_permute(x)
    span = 2
    while span <= n:
        half = span // 2
        for j in range(half):
            w = np.exp(-2j * np.pi * j / span)
            for k in range(j, n, span):
                t = w * x[k + half]
                x[k + half] = x[k] - t
                x[k] = x[k] + t
        span *= 2
    return x


def ifft(spec) -> np.ndarray:
    x = as_spectrum(spec)
    _check_pow2(len(x))
    return np.conj(fft(np.conj(x))) / len(x)


def fft_dataflow(sig, concurrent: bool = True):
    """Run the FFT as log2(N)+1 pipeline tasks (bit reverse, then one task per stage).

    Each stream beat carries a whole frame.  Returns ``(spectrum, RunStats)``.
    """
    x = as_spectrum(sig).copy()
    _check_pow2(len(x))
    levels = len(x).bit_length() - 1
    src = feed("x", [x])
    chans = [Stream(f"s{k}", 2) for k in range(levels + 1)]
    pipe = DataflowPipeline()

    def reverse(inp, out):
        v = inp.pop().copy()
        bit_reverse_permute(v)
        out.push(v)

    pipe.add("bit_reverse", reverse, [src], [chans[0]])
    for s in range(1, levels + 1):
        def stage(inp, out, s=s):
            out.push(fft_stage(inp.pop(), s))
        pipe.add(f"stage{s}", stage, [chans[s - 1]], [chans[s]])
    stats = pipe.run(concurrent=concurrent)
    (result,) = chans[levels].drain()
    return result, stats
