"""3x3 image filters: direct windowed form and single-pass line-buffer form.

Frames are ``uint8`` arrays of shape ``(height, width, channels)``.  Arithmetic is
integer: weighted sum, division truncating toward zero, clamp to 0..255.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_HEIGHT = 4096
MAX_WIDTH = 4096


@dataclass(frozen=True)
class Kernel3x3:
    coeffs: tuple  # row-major, 9 entries
    divisor: int = 1

    def __post_init__(self):
        c = tuple(int(v) for v in np.asarray(self.coeffs).reshape(-1))
        if len(c) != 9:
            raise ValueError("kernel needs 9 coefficients")
        if self.divisor == 0:
            raise ValueError("kernel divisor must be nonzero")
        object.__setattr__(self, "coeffs", c)

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.int64).reshape(3, 3)


IDENTITY = Kernel3x3((0, 0, 0, 0, 1, 0, 0, 0, 0), 1)
BOX_BLUR = Kernel3x3((1,) * 9, 9)
GAUSSIAN = Kernel3x3((1, 2, 1, 2, 4, 2, 1, 2, 1), 16)


@dataclass
class LineBufferStats:
    pixel_reads: int = 0
    line_buffer_words: int = 0
    window_registers: int = 9


def _as_frame(f) -> np.ndarray:
    f = np.asarray(f)
    if f.ndim == 2:
        f = f[:, :, None]
    if f.ndim != 3:
        raise ValueError("frame must be (height, width[, channels])")
    if f.shape[0] > MAX_HEIGHT or f.shape[1] > MAX_WIDTH:
        raise ValueError("frame exceeds configured size limits")
    return f


def _finish(acc, divisor: int):
    # C integer division truncates toward zero
    q = np.abs(acc) // abs(divisor) * np.sign(acc) * np.sign(divisor)
    return np.clip(q, 0, 255)


def _apply(window: np.ndarray, k: Kernel3x3) -> np.ndarray:
    """``window`` is (3, 3, channels); returns one output pixel."""
    acc = np.tensordot(k.matrix, window.astype(np.int64), axes=([0, 1], [0, 1]))
    return _finish(acc, k.divisor).astype(np.uint8)


def filter2d_naive(f, k: Kernel3x3) -> np.ndarray:
    """Interior pixels get the weighted window sum; a one-pixel border is black."""
    src = _as_frame(f).astype(np.int64)
    h, w, _ = src.shape
    out = np.zeros(src.shape, dtype=np.uint8)
    if h < 3 or w < 3:
        return out
    acc = np.zeros((h - 2, w - 2, src.shape[2]), dtype=np.int64)
    m = k.matrix
    for i in range(3):
        for j in range(3):
            acc += m[i, j] * src[i:i + h - 2, j:j + w - 2]
    out[1:-1, 1:-1] = _finish(acc, k.divisor)
    return out


def filter2d_linebuffer(f, k: Kernel3x3, stats: LineBufferStats | None = None,
                        extended: bool = True) -> np.ndarray:
    """Scanline filter holding two line buffers and a 3x3 window.

    With ``extended`` the loop runs one extra row and column so output ``(r, c)``
    lines up with the input.  Without it output lands one pixel down and right.
    """
    src = _as_frame(f)
    rows, cols, ch = src.shape
    out = np.zeros(src.shape, dtype=np.uint8)
    line = np.zeros((2, cols, ch), dtype=np.uint8)
    window = np.zeros((3, 3, ch), dtype=np.uint8)
    reads = 0
    extra = 1 if extended else 0
    for row in range(rows + extra):
        for col in range(cols + extra):
            if col < cols:
                window[:, :2] = window[:, 1:]
                window[0, 2] = line[0, col]
                window[1, 2] = line[1, col]
                if row < rows:
                    px = src[row, col]
                    reads += 1
                else:
                    px = 0
                window[2, 2] = px
                line[0, col] = line[1, col]
                line[1, col] = px
            if extended:
                if row >= 1 and col >= 1:
                    r, c = row - 1, col - 1
                    if r == 0 or c == 0 or r == rows - 1 or c == cols - 1:
                        out[r, c] = 0
                    else:
                        out[r, c] = _apply(window, k)
            else:
                # window is centred on (row-1, col-1) but written to (row, col)
                if row >= 2 and col >= 2:
                    out[row, col] = _apply(window, k)
    if stats is not None:
        stats.pixel_reads = reads
        stats.line_buffer_words = 2 * cols
    return out


def filter2d_boundary_constant(f, k: Kernel3x3, stats: LineBufferStats | None = None) -> np.ndarray:
    """Line-buffer filter where taps outside the frame read 0; every pixel is filtered."""
    src = _as_frame(f)
    rows, cols, ch = src.shape
    out = np.zeros(src.shape, dtype=np.uint8)
    line = np.zeros((2, cols, ch), dtype=np.uint8)
    window = np.zeros((3, 3, ch), dtype=np.uint8)
    reads = 0
    for row in range(rows + 1):
        for col in range(cols + 1):
            window[:, :2] = window[:, 1:]
            if col < cols:
                window[0, 2] = line[0, col]
                window[1, 2] = line[1, col]
                if row < rows:
                    px = src[row, col]
                    reads += 1
                else:
                    px = 0
                window[2, 2] = px
                line[0, col] = line[1, col]
                line[1, col] = px
            else:
                window[:, 2] = 0
            if row >= 1 and col >= 1:
                r, c = row - 1, col - 1
                tap = window.copy()
                # zero the taps that fall outside the frame
                if r == 0:
                    tap[0] = 0
                if r == rows - 1:
                    tap[2] = 0
                if c == 0:
                    tap[:, 0] = 0
                if c == cols - 1:
                    tap[:, 2] = 0
                out[r, c] = _apply(tap, k)
    if stats is not None:
        stats.pixel_reads = reads
        stats.line_buffer_words = 2 * cols
    return out
