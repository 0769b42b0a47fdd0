"""Insertion sort (array and systolic cell chain) and merge sort (iterative and dataflow)."""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .stream import DataflowPipeline, PipelineError, Stream, feed


@functools.total_ordering
class _Sentinel:
    def __init__(self, name: str, sign: int):
        self.name = name
        self.sign = sign

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return hash(self.name)

    def __lt__(self, other):
        if other is self:
            return False
        return self.sign < 0


# below / above every element
MIN = _Sentinel("MIN", -1)
MAX = _Sentinel("MAX", +1)


def _identity(v):
    return v


def insertion_sort(a: list, key=None, counter: dict | None = None) -> None:
    """Stable in-place insertion sort.  ``counter['cmp']`` accumulates comparisons."""
    key = key or _identity
    cmps = 0
    for i in range(1, len(a)):
        item = a[i]
        k = key(item)
        j = i
        while j > 0:
            cmps += 1
            if key(a[j - 1]) > k:
                a[j] = a[j - 1]
                j -= 1
            else:
                break
        a[j] = item
    if counter is not None:
        counter["cmp"] = counter.get("cmp", 0) + cmps


@dataclass
class SortCell:
    local: object = MIN


def cell_step(c: SortCell, x):
    """Keep the larger of ``x`` and the stored value, pass the smaller on."""
    if x < c.local:
        return x
    out, c.local = c.local, x
    return out


@dataclass
class CellChain:
    n: int
    cells: list = field(default=None)
    loaded: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("chain length must be >= 1")
        if self.cells is None:
            self.cells = [SortCell() for _ in range(self.n)]

    def locals(self) -> list:
        return [c.local for c in self.cells]


def insertion_cell_sort(inp: Stream, out: Stream, chain: CellChain) -> None:
    """One beat: pop an element, ripple it through the chain, push the chain output.

    Feed the ``n`` data items, then ``n`` copies of :data:`MAX`; the last ``n``
    outputs are the data in ascending order.
    """
    x = inp.pop()
    if x is not MAX:
        if chain.loaded >= chain.n:
            raise PipelineError(f"more than {chain.n} items inserted into the cell chain")
        chain.loaded += 1
    for c in chain.cells:
        x = cell_step(c, x)
    out.push(x)


def cell_sort(values) -> list:
    values = list(values)
    n = len(values)
    if n == 0:
        return []
    chain = CellChain(n)
    inp = feed("in", values + [MAX] * n)
    out = Stream("out", 2 * n)
    for _ in range(2 * n):
        insertion_cell_sort(inp, out, chain)
    res = out.drain()
    return res[n:]


def merge(src: list, i1: int, i2: int, i3: int, dst: list, key=None, counter: dict | None = None) -> None:
    """Merge sorted runs ``src[i1:i2]`` and ``src[i2:i3]`` into ``dst[i1:i3]``; ties go left."""
    if not 0 <= i1 <= i2 <= i3 <= len(src) or len(dst) < i3:
        raise ValueError(f"bad merge bounds {i1}, {i2}, {i3}")
    key = key or _identity
    f1, f2 = i1, i2
    cmps = 0
    for idx in range(i1, i3):
        if f1 < i2 and f2 < i3:
            cmps += 1
            take_left = key(src[f1]) <= key(src[f2])
        else:
            take_left = f2 == i3
        if take_left:
            dst[idx] = src[f1]
            f1 += 1
        else:
            dst[idx] = src[f2]
            f2 += 1
    if counter is not None:
        counter["cmp"] = counter.get("cmp", 0) + cmps


def _merge_pass(a: list, width: int, key=None, counter=None) -> list:
    n = len(a)
    tmp = list(a)
    for i1 in range(0, n, 2 * width):
        i2 = min(i1 + width, n)
        i3 = min(i1 + 2 * width, n)
        merge(a, i1, i2, i3, tmp, key, counter)
    return tmp


def merge_sort(a: list, key=None, counter: dict | None = None, trace: list | None = None) -> None:
    """Bottom-up merge sort, in place via one temp buffer copied back after each width."""
    width = 1
    n = len(a)
    while width < n:
        a[:] = _merge_pass(a, width, key, counter)
        if trace is not None:
            trace.append((width, list(a)))
        width *= 2


def merge_sort_parallel_many(arrays, key=None, concurrent: bool = True):
    """Sort several equal-length arrays through one log2(size)-stage merge pipeline.

    Stage ``s`` merges runs of width ``2**s``.  Returns ``(sorted_arrays, RunStats)``.
    """
    arrays = [list(a) for a in arrays]
    if not arrays:
        return [], None
    size = len(arrays[0])
    if any(len(a) != size for a in arrays):
        raise ValueError("all arrays must share one length")
    if size < 4 or size & (size - 1):
        raise ValueError(f"size {size} must be a power of two >= 4")
    stages = size.bit_length() - 1
    src = feed("in", arrays)
    chans = [Stream(f"t{s}", 2) for s in range(stages)]
    pipe = DataflowPipeline()
    prev = src
    for s in range(stages):
        def stage(inp, out, width=1 << s):
            out.push(_merge_pass(inp.pop(), width, key))
        pipe.add(f"merge{s}", stage, [prev], [chans[s]])
        prev = chans[s]
    if concurrent:
        # the last channel has no consumer stage, make room for every result
        chans[-1].capacity = max(2, len(arrays))
    stats = pipe.run(concurrent=concurrent)
    return chans[-1].drain(), stats


def merge_sort_parallel(a: list, b: list | None = None, key=None) -> list:
    """Sort ``a`` via the dataflow pipeline; writes into ``b`` if given and returns it."""
    (res,), _ = merge_sort_parallel_many([a], key)
    if b is None:
        return res
    b[:] = res
    return b
