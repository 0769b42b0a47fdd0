"""Prefix sum and histogram kernels."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np


def prefix_sum(xs) -> list[int]:
    out = []
    acc = 0
    for v in xs:
        acc += v
        out.append(acc)
    return out


@dataclass
class AccessCounter:
    reads: int = 0
    writes: int = 0


def histogram_naive(xs, num_bins: int) -> np.ndarray:
    hist = np.zeros(num_bins, dtype=np.int64)
    for v in xs:
        if not 0 <= v < num_bins:
            raise ValueError(f"bin {v} outside 0..{num_bins - 1}")
        hist[v] += 1
    return hist


def histogram(xs, num_bins: int, counter: AccessCounter | None = None) -> np.ndarray:
    """Histogram that caches the running count of the current bin in a local accumulator.

    Memory is only touched when the bin changes (one read of the new bin, one write
    of the old), plus a final flush.  ``counter`` tallies those accesses.
    """
    c = counter if counter is not None else AccessCounter()
    hist = [0] * num_bins
    xs = list(xs)
    if not xs:
        return np.zeros(num_bins, dtype=np.int64)
    for v in xs:
        if not 0 <= v < num_bins:
            raise ValueError(f"bin {v} outside 0..{num_bins - 1}")
    old = xs[0]
    acc = 0
    for val in xs:
        if old == val:
            acc += 1
        else:
            hist[old] = acc
            c.writes += 1
            acc = hist[val] + 1
            c.reads += 1
        old = val
    hist[old] = acc
    c.writes += 1
    return np.asarray(hist, dtype=np.int64)


def histogram_mapreduce(xs, num_bins: int, num_pe: int = 2, concurrent: bool = False) -> np.ndarray:
    """Split the input into ``num_pe`` contiguous chunks, histogram each, and sum bin-wise."""
    xs = list(xs)
    if num_pe < 1 or len(xs) % num_pe:
        raise ValueError(f"input length {len(xs)} not divisible by num_pe={num_pe}")
    step = len(xs) // num_pe
    chunks = [xs[p * step:(p + 1) * step] for p in range(num_pe)]
    if concurrent:
        with ThreadPoolExecutor(max_workers=num_pe) as ex:
            parts = list(ex.map(lambda ch: histogram(ch, num_bins), chunks))
    else:
        parts = [histogram(ch, num_bins) for ch in chunks]
    out = np.zeros(num_bins, dtype=np.int64)
    for p in parts:
        out += p
    return out
