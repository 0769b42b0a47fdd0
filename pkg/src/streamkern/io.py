"""Text/binary file formats used by the command line tools.

.dat: one value per line, or two whitespace-separated columns (i q) for complex data.
.crs: line 1 "n m nnz", then rowPtr, columnIndex, values lines.
PPM: binary P6, maxval 255.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .linalg import CrsMatrix


def _num(tok: str):
    v = float(tok)
    return int(v) if v.is_integer() and "." not in tok and "e" not in tok.lower() else v


def read_dat(path) -> np.ndarray:
    """Real data as float64, two-column data as complex128."""
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([float(t) for t in line.split()])
    if not rows:
        return np.zeros(0)
    width = len(rows[0])
    if any(len(r) != width for r in rows) or width not in (1, 2):
        raise ValueError(f"{path}: expected 1 or 2 columns on every line")
    arr = np.asarray(rows)
    if width == 2:
        return arr[:, 0] + 1j * arr[:, 1]
    return arr[:, 0]


def read_ints(path) -> list[int]:
    vals = read_dat(path)
    if np.iscomplexobj(vals) or np.any(vals != np.round(vals)):
        raise ValueError(f"{path}: expected integer values")
    return [int(v) for v in vals]


def format_value(v) -> str:
    v = complex(v) if np.iscomplexobj(v) else v
    if isinstance(v, complex):
        return f"{format_value(v.real)} {format_value(v.imag)}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    f = float(v)
    return str(int(f)) if f.is_integer() and abs(f) < 1e15 else repr(f)


def dat_text(values) -> str:
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return "".join(f"{format_value(v.real)} {format_value(v.imag)}\n" for v in arr)
    return "".join(format_value(v) + "\n" for v in arr.tolist())


def write_dat(path, values) -> None:
    Path(path).write_text(dat_text(values), encoding="utf-8")


def write_csv(path, values) -> None:
    arr = np.asarray(values)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        if np.iscomplexobj(arr):
            w.writerow(["index", "value", "imag"])
            for i, v in enumerate(arr):
                w.writerow([i, format_value(v.real), format_value(v.imag)])
        else:
            w.writerow(["index", "value"])
            for i, v in enumerate(arr.tolist()):
                w.writerow([i, format_value(v)])


def read_matrix(path) -> list[list]:
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([_num(t) for t in line.split()])
    return rows


def write_matrix(path, m) -> None:
    Path(path).write_text("".join(" ".join(format_value(v) for v in r) + "\n" for r in m),
                          encoding="utf-8")


def read_crs(path) -> CrsMatrix:
    lines = [l.strip() for l in Path(path).read_text(encoding="utf-8").splitlines()]
    lines = [l for l in lines if l and not l.startswith("#")]
    n, m, nnz = (int(t) for t in lines[0].split())
    row_ptr = [int(t) for t in lines[1].split()]
    col = [int(t) for t in lines[2].split()] if nnz else []
    vals = [_num(t) for t in lines[3].split()] if nnz else []
    if len(vals) != nnz:
        raise ValueError(f"{path}: header says {nnz} nonzeros, found {len(vals)}")
    return CrsMatrix(vals, col, row_ptr, n, m)


def write_crs(path, a: CrsMatrix) -> None:
    text = (f"{a.n} {a.m} {a.nnz}\n" + " ".join(map(str, a.row_ptr)) + "\n"
            + " ".join(map(str, a.column_index)) + "\n"
            + " ".join(format_value(v) for v in a.values) + "\n")
    Path(path).write_text(text, encoding="utf-8")


def _ppm_tokens(data: bytes, count: int):
    toks, pos = [], 0
    while len(toks) < count:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while data[pos:pos + 1] not in (b"\n", b""):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        toks.append(data[start:pos])
    return toks, pos + 1  # a single whitespace byte precedes the raster


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    toks, pos = _ppm_tokens(data, 4)
    if toks[0] != b"P6":
        raise ValueError(f"{path}: not a binary PPM (P6) file")
    w, h, maxval = (int(t) for t in toks[1:])
    if maxval != 255:
        raise ValueError(f"{path}: only maxval 255 is supported")
    raster = np.frombuffer(data, dtype=np.uint8, count=w * h * 3, offset=pos)
    return raster.reshape(h, w, 3).copy()


def write_ppm(path, frame) -> None:
    f = np.asarray(frame, dtype=np.uint8)
    if f.ndim == 2:
        f = np.repeat(f[:, :, None], 3, axis=2)
    h, w, _ = f.shape
    Path(path).write_bytes(f"P6\n{w} {h}\n255\n".encode() + f.tobytes())
