"""Two's-complement fixed-point numbers with exact widening arithmetic.

A format is ``(width, int_bits, signed)``.  The quantum is ``2**(int_bits - width)``
and the stored integer ``raw`` is the bit pattern interpreted in two's complement
(or unsigned).  ``int_bits`` may be zero, negative, or larger than ``width``.

Addition and multiplication never round: the result format grows so that the
exact value fits.  Explicit rounding and overflow handling only happens in
:func:`quantize` and :func:`convert`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

MAX_WIDTH = 64


class WidthOverflowError(ValueError):
    """An exact result would need more than ``MAX_WIDTH`` bits."""


class Rounding(str, Enum):
    TO_NEGATIVE_INFINITY = "to_negative_infinity"
    TO_POSITIVE_INFINITY = "to_positive_infinity"
    TO_ZERO = "to_zero"
    AWAY_FROM_ZERO = "away_from_zero"
    NEAREST_EVEN = "nearest_even"


class Overflow(str, Enum):
    WRAP = "wrap"
    SATURATE = "saturate"


@dataclass(frozen=True)
class FixedFormat:
    width: int
    int_bits: int
    signed: bool = True

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise WidthOverflowError(f"width must be in 1..{MAX_WIDTH}, got {self.width}")

    @property
    def frac_bits(self) -> int:
        return self.width - self.int_bits

    @property
    def quantum(self) -> Fraction:
        return Fraction(2) ** (self.int_bits - self.width)

    @property
    def min_raw(self) -> int:
        return -(1 << (self.width - 1)) if self.signed else 0

    @property
    def max_raw(self) -> int:
        return (1 << (self.width - self.signed)) - 1

    @property
    def min_value(self) -> Fraction:
        return self.min_raw * self.quantum

    @property
    def max_value(self) -> Fraction:
        return self.max_raw * self.quantum

    def __str__(self):
        return f"fixed<{self.width},{self.int_bits},{'s' if self.signed else 'u'}>"

    @classmethod
    def parse(cls, text: str) -> "FixedFormat":
        """Parse ``fixed<W,I,s>``, ``fixed<W,I,u>`` or the short ``W,I`` form (signed)."""
        text = text.strip()
        m = re.fullmatch(r"fixed<\s*(\d+)\s*,\s*(-?\d+)\s*,\s*([su])\s*>", text)
        if m:
            return cls(int(m.group(1)), int(m.group(2)), m.group(3) == "s")
        m = re.fullmatch(r"(\d+)\s*,\s*(-?\d+)(?:\s*,\s*([su]))?", text)
        if m:
            return cls(int(m.group(1)), int(m.group(2)), m.group(3) != "u")
        raise ValueError(f"cannot parse fixed-point format {text!r}")


def _round_div(n: int, shift: int, mode: Rounding) -> int:
    """Divide ``n`` by ``2**shift`` (shift >= 0) and round to an integer."""
    if shift <= 0:
        return n << -shift
    d = 1 << shift
    q, r = divmod(n, d)  # floor division, 0 <= r < d
    if r == 0:
        return q
    mode = Rounding(mode)
    if mode is Rounding.TO_NEGATIVE_INFINITY:
        return q
    if mode is Rounding.TO_POSITIVE_INFINITY:
        return q + 1
    if mode is Rounding.TO_ZERO:
        return q + 1 if n < 0 else q
    if mode is Rounding.AWAY_FROM_ZERO:
        return q if n < 0 else q + 1
    twice = 2 * r
    if twice < d:
        return q
    if twice > d:
        return q + 1
    return q if q % 2 == 0 else q + 1


def _fit(raw: int, fmt: FixedFormat, mode: Overflow) -> int:
    mode = Overflow(mode)
    if mode is Overflow.SATURATE:
        return max(fmt.min_raw, min(fmt.max_raw, raw))
    raw &= (1 << fmt.width) - 1
    if fmt.signed and raw >> (fmt.width - 1):
        raw -= 1 << fmt.width
    return raw


@dataclass(frozen=True)
class FixedValue:
    fmt: FixedFormat
    raw: int

    def __post_init__(self):
        if not self.fmt.min_raw <= self.raw <= self.fmt.max_raw:
            raise ValueError(f"raw {self.raw} does not fit {self.fmt}")

    @property
    def value(self) -> Fraction:
        return self.raw * self.fmt.quantum

    def __float__(self):
        return math.ldexp(self.raw, -self.fmt.frac_bits)

    def __repr__(self):
        return f"FixedValue({float(self)!r}, {self.fmt})"

    def bits(self) -> str:
        return format(self.raw & ((1 << self.fmt.width) - 1), f"0{self.fmt.width}b")

    def __add__(self, other):
        if not isinstance(other, FixedValue):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, FixedValue):
            return NotImplemented
        return sub(self, other)

    def __mul__(self, other):
        if not isinstance(other, FixedValue):
            return NotImplemented
        return mul(self, other)

    def __neg__(self):
        return sub(FixedValue(self.fmt, 0), self)

    def __rshift__(self, k: int):
        return shift_right_arith(self, k)

    def _cmp_key(self, other):
        if isinstance(other, FixedValue):
            return other.value
        if isinstance(other, (int, float, Fraction)):
            return Fraction(other)
        return NotImplemented

    def __eq__(self, other):
        key = self._cmp_key(other)
        return key is not NotImplemented and self.value == key

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        key = self._cmp_key(other)
        return NotImplemented if key is NotImplemented else self.value < key

    def __le__(self, other):
        key = self._cmp_key(other)
        return NotImplemented if key is NotImplemented else self.value <= key

    def __gt__(self, other):
        key = self._cmp_key(other)
        return NotImplemented if key is NotImplemented else self.value > key

    def __ge__(self, other):
        key = self._cmp_key(other)
        return NotImplemented if key is NotImplemented else self.value >= key


def quantize(x: float, fmt: FixedFormat, rounding: Rounding = Rounding.NEAREST_EVEN,
             overflow: Overflow = Overflow.SATURATE) -> FixedValue:
    """Round a real number onto ``fmt``'s grid, then apply overflow handling."""
    if not math.isfinite(x):
        raise ValueError(f"cannot quantize non-finite value {x!r}")
    exact = Fraction(x) * Fraction(2) ** fmt.frac_bits
    # exact has a power-of-two denominator since x is a binary float
    shift = exact.denominator.bit_length() - 1
    raw = _round_div(exact.numerator, shift, rounding)
    return FixedValue(fmt, _fit(raw, fmt, overflow))


def convert(a: FixedValue, fmt: FixedFormat, rounding: Rounding = Rounding.TO_NEGATIVE_INFINITY,
            overflow: Overflow = Overflow.WRAP) -> FixedValue:
    """Re-express ``a`` in ``fmt``: align binary points, round, then handle overflow."""
    raw = _round_div(a.raw, a.fmt.frac_bits - fmt.frac_bits, rounding)
    return FixedValue(fmt, _fit(raw, fmt, overflow))


def _aligned(a: FixedValue, b: FixedValue, signed: bool) -> tuple[int, int, FixedFormat]:
    frac = max(a.fmt.frac_bits, b.fmt.frac_bits)
    int_bits = max(a.fmt.int_bits, b.fmt.int_bits) + 1
    width = int_bits + frac
    if width > MAX_WIDTH:
        raise WidthOverflowError(f"sum of {a.fmt} and {b.fmt} needs {width} bits")
    fmt = FixedFormat(width, int_bits, signed)
    return a.raw << (frac - a.fmt.frac_bits), b.raw << (frac - b.fmt.frac_bits), fmt


def add(a: FixedValue, b: FixedValue) -> FixedValue:
    if a.fmt.signed != b.fmt.signed:
        raise ValueError("add requires operands of the same signedness")
    ra, rb, fmt = _aligned(a, b, a.fmt.signed)
    return FixedValue(fmt, ra + rb)


def sub(a: FixedValue, b: FixedValue) -> FixedValue:
    """Exact difference.  The extra bit becomes a sign bit for unsigned operands."""
    if a.fmt.signed != b.fmt.signed:
        raise ValueError("sub requires operands of the same signedness")
    ra, rb, fmt = _aligned(a, b, True)
    return FixedValue(fmt, ra - rb)


def mul(a: FixedValue, b: FixedValue) -> FixedValue:
    width = a.fmt.width + b.fmt.width
    if width > MAX_WIDTH:
        raise WidthOverflowError(f"product of {a.fmt} and {b.fmt} needs {width} bits")
    fmt = FixedFormat(width, a.fmt.int_bits + b.fmt.int_bits, a.fmt.signed or b.fmt.signed)
    return FixedValue(fmt, a.raw * b.raw)


def shift_right_arith(a: FixedValue, k: int) -> FixedValue:
    """Multiply by ``2**-k``, flooring the raw integer.  The format is unchanged."""
    if not 0 <= k < MAX_WIDTH:
        raise ValueError(f"shift amount must be in 0..{MAX_WIDTH - 1}")
    return FixedValue(a.fmt, a.raw >> k)


def fixed_sum(values) -> FixedValue:
    """Exact sum of many values, growing the integer part by ``ceil(log2(n))`` bits once.

    Chaining :func:`add` would grow one bit per addition; this is the accumulator
    sizing a hardware adder tree or MAC loop uses.
    """
    values = list(values)
    if not values:
        raise ValueError("fixed_sum of an empty sequence")
    signed = values[0].fmt.signed
    if any(v.fmt.signed != signed for v in values):
        raise ValueError("fixed_sum requires operands of the same signedness")
    frac = max(v.fmt.frac_bits for v in values)
    int_bits = max(v.fmt.int_bits for v in values) + (len(values) - 1).bit_length()
    width = int_bits + frac
    if width > MAX_WIDTH:
        raise WidthOverflowError(f"sum of {len(values)} values needs {width} bits")
    total = sum(v.raw << (frac - v.fmt.frac_bits) for v in values)
    return FixedValue(FixedFormat(width, int_bits, signed), total)
