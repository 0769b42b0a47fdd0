"""QPSK/OFDM loopback and a matched-filter + CORDIC phase detector."""
from __future__ import annotations

import math

import numpy as np

from .cordic import CordicConfig, PolarSample, cart2pol
from .filters import ComplexFir, ComplexSample
from .stream import DataflowPipeline, Stream, feed
from .transforms import fft, ifft, is_pow2

OFDM_SIZE = 1024

# Gray map: neighbouring quadrants differ in one bit
_QPSK = {0: (1.0, 1.0), 1: (-1.0, 1.0), 3: (-1.0, -1.0), 2: (1.0, -1.0)}


def qpsk_encode(sym: int) -> ComplexSample:
    if sym not in _QPSK:
        raise ValueError(f"QPSK symbol must be 0..3, got {sym}")
    return ComplexSample(*_QPSK[sym])


def qpsk_decode(x) -> int:
    """Quadrant slicer; accepts a ComplexSample or a Python complex."""
    if isinstance(x, ComplexSample):
        i, q = float(x.i), float(x.q)
    else:
        i, q = x.real, x.imag
    if i >= 0:
        return 0 if q >= 0 else 2
    return 1 if q >= 0 else 3


def ofdm_roundtrip(symbols, snr_db: float | None = None, seed: int = 0, n: int = OFDM_SIZE) -> list[int]:
    """encode -> ifft -> optional AWGN -> fft -> decode for one block of ``n`` symbols."""
    symbols = list(symbols)
    if not is_pow2(n) or n < 4:
        raise ValueError("OFDM block size must be a power of two >= 4")
    if len(symbols) != n:
        raise ValueError(f"expected {n} symbols, got {len(symbols)}")
    carriers = np.array([complex(*qpsk_encode(s)) for s in symbols])
    tx = ifft(carriers)
    if snr_db is not None:
        rng = np.random.default_rng(seed)
        power = np.mean(np.abs(tx) ** 2)
        sigma = math.sqrt(power / 10 ** (snr_db / 10) / 2)
        tx = tx + sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    rx = fft(tx)
    return [qpsk_decode(v) for v in rx]


def golay_pair(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Binary Golay complementary pair of length ``n`` (a power of two)."""
    if not is_pow2(n):
        raise ValueError("Golay length must be a power of two")
    a = np.array([1.0])
    b = np.array([1.0])
    while len(a) < n:
        a, b = np.concatenate([a, b]), np.concatenate([a, -b])
    return a, b


def pilot(n: int = 32) -> np.ndarray:
    a, b = golay_pair(n)
    return (a + 1j * b) / math.sqrt(2)


def matched_taps(p) -> np.ndarray:
    """Time-reversed conjugate of the pilot."""
    return np.conj(np.asarray(p, dtype=complex)[::-1])


def phase_detect(iq, matched, cfg: CordicConfig, concurrent: bool = True) -> list[PolarSample]:
    """Complex FIR with ``matched`` taps, then CORDIC vectoring on each output sample.

    ``iq`` is a :class:`Stream` of ComplexSample or any iterable of samples/complex numbers.
    The two kernels run as a two-stage dataflow pipeline.
    """
    if not isinstance(iq, Stream):
        iq = feed("iq", [x if isinstance(x, ComplexSample) else ComplexSample(x.real, x.imag)
                         for x in iq])
    taps = np.asarray(matched, dtype=complex)
    fir = ComplexFir.create(list(taps.real), list(taps.imag), zero=0.0)
    mid = Stream("filtered", 4)
    out = Stream("polar", max(4, len(iq) + 1))

    def fir_stage(inp, o):
        o.push(fir.step(inp.pop()))

    def cordic_stage(inp, o):
        y = inp.pop()
        if y.i == 0 and y.q == 0:
            o.push(PolarSample(0.0, 0.0))
        else:
            o.push(cart2pol(float(y.i), float(y.q), cfg))

    p = DataflowPipeline()
    p.add("complex_fir", fir_stage, [iq], [mid])
    p.add("cordic", cordic_stage, [mid], [out])
    p.run(concurrent=concurrent)
    return out.drain()
