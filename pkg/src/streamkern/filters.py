"""Streaming FIR filters.

Every kernel is generic over the sample type: floats, ints, or
:class:`~streamkern.fixed.FixedValue`.  Fixed-point accumulation uses
:func:`~streamkern.fixed.fixed_sum` so no precision is lost.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .fixed import FixedFormat, FixedValue, fixed_sum, quantize

# 11-tap reference filter, symmetric about the centre tap
FIR11_TAPS = (53, 0, -91, 0, 313, 500, 313, 0, -91, 0, 53)

COEF_FORMAT = FixedFormat(10, 10, True)


class ComplexSample(NamedTuple):
    i: object
    q: object


def _dot(terms):
    terms = list(terms)
    if isinstance(terms[0], FixedValue):
        return fixed_sum(terms)
    acc = terms[0]
    for t in terms[1:]:
        acc = acc + t
    return acc


@dataclass
class FirState:
    coefficients: list
    shift_reg: list = field(default=None)

    def __post_init__(self):
        self.coefficients = list(self.coefficients)
        if not self.coefficients:
            raise ValueError("FIR needs at least one coefficient")
        if self.shift_reg is None:
            self.shift_reg = [0] * len(self.coefficients)
        elif len(self.shift_reg) != len(self.coefficients):
            raise ValueError("delay line length must match coefficient count")

    @classmethod
    def create(cls, coefficients, zero=0) -> "FirState":
        """New filter with the delay line filled with ``zero`` (use a FixedValue zero for fixed mode)."""
        c = list(coefficients)
        return cls(c, [zero] * len(c))

    @property
    def taps(self) -> int:
        return len(self.coefficients)


def fixed_taps(coefficients=FIR11_TAPS, fmt: FixedFormat = COEF_FORMAT) -> list[FixedValue]:
    return [quantize(float(c), fmt) for c in coefficients]


def fir_step(st: FirState, x):
    """Shift ``x`` into the delay line and return the filter output."""
    sr = st.shift_reg
    for j in range(len(sr) - 1, 0, -1):
        sr[j] = sr[j - 1]
    sr[0] = x
    return _dot(c * s for c, s in zip(st.coefficients, sr))


def fir_step_folded(st: FirState, x):
    """Same as :func:`fir_step` for symmetric taps, using half the multiplies.

    Pairs ``shift_reg[j]`` and ``shift_reg[N-1-j]`` are added before multiplying
    by the shared coefficient.
    """
    c = st.coefficients
    n = len(c)
    if any(c[j] != c[n - 1 - j] for j in range(n // 2)):
        raise ValueError("folded FIR requires symmetric coefficients")
    sr = st.shift_reg
    for j in range(n - 1, 0, -1):
        sr[j] = sr[j - 1]
    sr[0] = x
    terms = [c[j] * (sr[j] + sr[n - 1 - j]) for j in range(n // 2)]
    if n % 2:
        terms.append(c[n // 2] * sr[n // 2])
    return _dot(terms)


def fir_block(c: Sequence, x: Sequence, zero=0) -> list:
    """Convolve ``x`` with taps ``c`` from zero initial state; output length equals input length."""
    if len(c) == 0:
        raise ValueError("FIR needs at least one coefficient")
    st = FirState.create(c, zero)
    return [fir_step(st, v) for v in x]


def moving_average(x: Sequence, n: int) -> list:
    """Causal ``n``-point mean with zeros before the first sample."""
    if n < 1:
        raise ValueError("window length must be >= 1")
    out = []
    acc = 0
    for i, v in enumerate(x):
        acc += v
        if i >= n:
            acc -= x[i - n]
        out.append(acc / n)
    return out


@dataclass
class ComplexFir:
    """Four real filters making one complex filter: two with I taps, two with Q taps."""
    st_i: FirState
    st_q: FirState
    st_i2: FirState
    st_q2: FirState

    @classmethod
    def create(cls, coef_i, coef_q, zero=0) -> "ComplexFir":
        if len(coef_i) != len(coef_q):
            raise ValueError("I and Q coefficient lists differ in length")
        return cls(FirState.create(coef_i, zero), FirState.create(coef_q, zero),
                   FirState.create(coef_i, zero), FirState.create(coef_q, zero))

    def step(self, x: ComplexSample) -> ComplexSample:
        return complex_fir_step(self.st_i, self.st_q, self.st_i2, self.st_q2, x)


def complex_fir_step(st_i: FirState, st_q: FirState, st_i2: FirState, st_q2: FirState,
                     x: ComplexSample) -> ComplexSample:
    n = st_i.taps
    if not (st_q.taps == st_i2.taps == st_q2.taps == n):
        raise ValueError("complex FIR component filters differ in length")
    ii = fir_step(st_i, x.i)
    qq = fir_step(st_q, x.q)
    iq = fir_step(st_i2, x.q)
    qi = fir_step(st_q2, x.i)
    return ComplexSample(ii - qq, iq + qi)
