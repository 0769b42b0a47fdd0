import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from streamkern.cordic import (
    CordicConfig, angle_table_degrees, cart2pol, cordic_gain, rotate, rotate_step, sincos, vector,
)
from streamkern.fixed import FixedFormat

TABLE_ANGLES = [45.000, 26.565, 14.036, 7.125, 3.576, 1.790, 0.895]
TABLE_GAINS = [1.41421, 1.58114, 1.62980, 1.64248, 1.64569, 1.64649, 1.64669]


def test_angle_and_gain_table():
    assert [round(a, 3) for a in angle_table_degrees(7)] == TABLE_ANGLES
    assert [round(cordic_gain(n), 5) for n in range(1, 8)] == TABLE_GAINS
    assert cordic_gain(30) == pytest.approx(1.64676025812107, abs=1e-9)


def test_gain_needs_positive_n():
    with pytest.raises(ValueError):
        cordic_gain(0)


def test_first_rotation_is_45_degrees():
    assert rotate_step(1.0, 0.0, 1, 0) == (1.0, 1.0)


def test_plus_minus_restores_scaled():
    x, y = rotate_step(*rotate_step(0.3, -0.7, 1, 2), -1, 2)
    k2 = 1 + 2.0 ** -4
    assert (x, y) == pytest.approx((0.3 * k2, -0.7 * k2))


def test_large_shift_is_identity():
    f = FixedFormat(16, 2)
    cfg = CordicConfig(1, fmt=f)
    x, y = cfg._num(0.5), cfg._num(0.25)
    assert rotate_step(x, y, 1, 40, cfg) == (x, y)


def test_sixty_degrees_five_steps():
    res = rotate(math.radians(60), CordicConfig(5))
    assert math.degrees(res.angle) == pytest.approx(61.078, abs=1e-3)
    assert (res.x, res.y) == pytest.approx(
        (math.cos(res.angle), math.sin(res.angle)), abs=2e-3)


def test_zero_angle():
    c, s = sincos(0.0, CordicConfig(20))
    assert abs(c - 1) <= 2 * 2.0 ** -20
    assert abs(s) <= 2 * 2.0 ** -20


def test_thirty_degrees():
    c, s = sincos(math.pi / 6, CordicConfig(24))
    assert abs(c - math.cos(math.pi / 6)) <= 1e-5
    assert abs(s - 0.5) <= 1e-5


def test_out_of_range_rejected():
    with pytest.raises(ValueError):
        sincos(2.0, CordicConfig(8))


@pytest.mark.parametrize("x, y", [(3, 4), (-3, 4), (-3, -4), (3, -4), (-1, 0), (1, 0), (0, 1), (0, -2)])
def test_cart2pol_quadrants(x, y):
    p = cart2pol(x, y, CordicConfig(24))
    assert p.r == pytest.approx(math.hypot(x, y), abs=1e-4)
    assert p.theta == pytest.approx(math.atan2(y, x), abs=1e-4)
    assert -math.pi < p.theta <= math.pi


def test_cart2pol_origin_rejected():
    with pytest.raises(ValueError):
        cart2pol(0, 0, CordicConfig(8))


def test_axis_case_n16():
    p = cart2pol(0, 1, CordicConfig(16))
    assert abs(p.theta - math.pi / 2) <= 2.0 ** -15
    assert abs(p.r - 1) <= 1e-4


@given(st.floats(-math.pi / 2, math.pi / 2), st.integers(4, 30))
def test_convergence_bound(theta, n):
    cfg = CordicConfig(n)
    res = rotate(theta, cfg)
    assert abs(res.angle - theta) <= cfg.angles[-1] + 1e-15


@given(st.floats(-math.pi / 2, math.pi / 2), st.integers(1, 30))
def test_uncompensated_magnitude(theta, n):
    res = rotate(theta, CordicConfig(n, gain_compensated=False))
    assert math.hypot(res.x, res.y) == pytest.approx(cordic_gain(n), abs=1e-9)


@given(st.floats(-10, 10), st.floats(-10, 10), st.integers(12, 30))
def test_polar_roundtrip(x, y, n):
    if math.hypot(x, y) < 1e-3:
        return
    cfg = CordicConfig(n)
    p = cart2pol(x, y, cfg)
    th = p.theta
    # rotation mode is limited to +-90 degrees; fold by symmetry
    sign = 1.0
    if th > math.pi / 2:
        th, sign = th - math.pi, -1.0
    elif th < -math.pi / 2:
        th, sign = th + math.pi, -1.0
    c, s = sincos(th, cfg)
    tol = 4 * 2.0 ** -n * math.hypot(x, y) + 1e-12
    assert abs(sign * p.r * c - x) <= tol
    assert abs(sign * p.r * s - y) <= tol


def test_fixed_matches_float_within_8_quanta():
    fmt = FixedFormat(16, 2)
    q = float(fmt.quantum)
    fx, fl = CordicConfig(14, fmt=fmt), CordicConfig(14)
    for th in np.linspace(-1.5, 1.5, 61):
        a, b = sincos(th, fx), sincos(th, fl)
        assert abs(float(a[0]) - b[0]) <= 8 * q
        assert abs(float(a[1]) - b[1]) <= 8 * q


def test_fixed_vectoring():
    fmt = FixedFormat(18, 3)
    p = cart2pol(0.6, -0.3, CordicConfig(14, fmt=fmt))
    assert p.theta == pytest.approx(math.atan2(-0.3, 0.6), abs=1e-3)
    assert p.r == pytest.approx(math.hypot(0.6, 0.3), abs=1e-3)


def test_vector_drives_y_to_zero():
    res = vector(0.3, 0.8, CordicConfig(20))
    assert abs(res.y) < 1e-5
