"""CORDIC rotation (sin/cos) and vectoring (Cartesian to polar) modes.

Works in plain floating point or on a :class:`FixedFormat` grid.  In fixed mode
``x``, ``y`` and the angle share one format; every add/sub is converted back to
that format with wraparound, and the ``2**-i`` scaling is an arithmetic shift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .fixed import FixedFormat, FixedValue, Overflow, convert, quantize, shift_right_arith


def cordic_gain(n: int) -> float:
    """Cumulative magnitude growth after ``n`` rotations."""
    if n < 1:
        raise ValueError("need at least one iteration")
    return math.prod(math.sqrt(1.0 + 2.0 ** (-2 * i)) for i in range(n))


class PolarSample(NamedTuple):
    r: float
    theta: float


class CordicResult(NamedTuple):
    x: object
    y: object
    angle: object  # accumulated rotation (rotation mode) or recovered theta (vectoring mode)


@dataclass(frozen=True)
class CordicConfig:
    num_iterations: int = 16
    gain_compensated: bool = True
    fmt: FixedFormat | None = None  # None means floating point
    angles: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.num_iterations < 1:
            raise ValueError("num_iterations must be >= 1")
        table = tuple(math.atan(2.0 ** -i) for i in range(self.num_iterations))
        object.__setattr__(self, "angles", tuple(self._num(a) for a in table))

    @property
    def gain(self) -> float:
        return cordic_gain(self.num_iterations)

    def _num(self, v: float):
        if self.fmt is None:
            return float(v)
        return quantize(v, self.fmt)

    def _fit(self, v):
        # keep fixed values in the working format after widening add/sub
        if self.fmt is None:
            return v
        return convert(v, self.fmt, overflow=Overflow.WRAP)

    def to_float(self, v) -> float:
        return float(v)


def angle_table_degrees(n: int) -> list[float]:
    return [math.degrees(math.atan(2.0 ** -i)) for i in range(n)]


def _shift(v, i: int):
    if isinstance(v, FixedValue):
        return shift_right_arith(v, min(i, 63))
    return math.ldexp(v, -i)


def rotate_step(x, y, sigma: int, i: int, cfg: CordicConfig | None = None):
    """One micro-rotation by ``sigma * atan(2**-i)`` (scaled by ``sqrt(1 + 2**-2i)``)."""
    if i < 0:
        raise ValueError("iteration index must be >= 0")
    if sigma not in (1, -1):
        raise ValueError("sigma must be +1 or -1")
    fit = cfg._fit if cfg is not None else (lambda v: v)
    xs, ys = _shift(x, i), _shift(y, i)
    if sigma > 0:
        return fit(x - ys), fit(y + xs)
    return fit(x + ys), fit(y - xs)


def rotate(theta: float, cfg: CordicConfig) -> CordicResult:
    """Rotation mode: drive the accumulated angle toward ``theta``."""
    if not -math.pi / 2 <= theta <= math.pi / 2:
        raise ValueError(f"theta {theta} outside [-pi/2, pi/2]")
    x0 = 1.0 / cfg.gain if cfg.gain_compensated else 1.0
    x, y = cfg._num(x0), cfg._num(0.0)
    target = cfg._num(theta)
    acc = cfg._num(0.0)
    for i, a in enumerate(cfg.angles):
        sigma = 1 if acc <= target else -1
        x, y = rotate_step(x, y, sigma, i, cfg)
        acc = cfg._fit(acc + a if sigma > 0 else acc - a)
    return CordicResult(x, y, acc)


def sincos(theta: float, cfg: CordicConfig) -> tuple:
    """Return ``(cos, sin)`` of ``theta`` (radians, within +-pi/2)."""
    res = rotate(theta, cfg)
    return res.x, res.y


def vector(x: float, y: float, cfg: CordicConfig) -> CordicResult:
    """Vectoring mode: rotate ``(x, y)`` onto the positive x axis, tracking the angle."""
    if x == 0 and y == 0:
        raise ValueError("cart2pol undefined at the origin")
    # pre-rotate into the right half plane
    if y > 0 or (y == 0 and x < 0):
        theta0, x, y = math.pi / 2, y, -x
    elif y < 0:
        theta0, x, y = -math.pi / 2, -y, x
    else:
        theta0 = 0.0
    xv, yv, acc = cfg._num(x), cfg._num(y), cfg._num(theta0)
    for i, a in enumerate(cfg.angles):
        sigma = -1 if yv > 0 else 1
        xv, yv = rotate_step(xv, yv, sigma, i, cfg)
        # rotating the vector by +a means the original angle was a smaller
        acc = cfg._fit(acc - a if sigma > 0 else acc + a)
    return CordicResult(xv, yv, acc)


def cart2pol(x: float, y: float, cfg: CordicConfig) -> PolarSample:
    res = vector(x, y, cfg)
    r = float(res.x)
    if cfg.gain_compensated:
        r /= cfg.gain
    theta = float(res.angle)
    # the residual can overshoot the negative x axis slightly; keep theta in (-pi, pi]
    if theta > math.pi or theta <= -math.pi:
        theta = math.pi
    return PolarSample(r, theta)
