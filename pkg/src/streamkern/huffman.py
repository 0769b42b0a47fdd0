"""Canonical Huffman encoder as seven stages.

filter -> radix sort -> tree -> bit lengths -> truncate -> canonize -> codewords.
Array layout follows the usual hardware formulation: intermediate node ``i``
has ``left[i]``/``right[i]`` holding a symbol value or :data:`INTERNAL_NODE`,
and ``parent[i] > i`` except for the root, whose parent is 0.
"""
from __future__ import annotations

from dataclasses import dataclass

from .stream import DataflowPipeline, Stream, feed
from .transforms import bit_reverse_index

INPUT_SYMBOL_SIZE = 256
TREE_DEPTH = 64
MAX_CODEWORD_LENGTH = 27
CODEWORD_LENGTH_BITS = 5
INTERNAL_NODE = -1


class HuffmanError(ValueError):
    pass


@dataclass(frozen=True)
class Symbol:
    value: int
    frequency: int


@dataclass
class HuffTree:
    parent: list[int]
    left: list[int]
    right: list[int]

    @property
    def node_count(self) -> int:
        return len(self.parent)


def filter_symbols(freq) -> list[Symbol]:
    """Drop zero-frequency entries; keep ascending value order."""
    freq = list(freq)
    if len(freq) > INPUT_SYMBOL_SIZE:
        raise HuffmanError(f"at most {INPUT_SYMBOL_SIZE} symbols")
    out = []
    for v, f in enumerate(freq):
        if f < 0 or f >= 1 << 32:
            raise HuffmanError(f"frequency {f} for symbol {v} is not a 32-bit unsigned value")
        if f:
            out.append(Symbol(v, int(f)))
    return out


def radix_sort(symbols: list[Symbol]) -> list[Symbol]:
    """Stable LSD counting sort on frequency, 4-bit digits, 8 passes."""
    cur = list(symbols)
    for shift in range(0, 32, 4):
        counts = [0] * 16
        for s in cur:
            counts[(s.frequency >> shift) & 0xF] += 1
        # exclusive prefix sum gives each digit's first output slot
        start = [0] * 16
        for d in range(1, 16):
            start[d] = start[d - 1] + counts[d - 1]
        nxt = [None] * len(cur)
        for s in cur:
            d = (s.frequency >> shift) & 0xF
            nxt[start[d]] = s
            start[d] += 1
        cur = nxt
    return cur


def create_tree(sorted_syms: list[Symbol]) -> tuple[HuffTree, list[int]]:
    """Two-queue construction: sorted symbols and (already sorted) new intermediate nodes."""
    n = len(sorted_syms)
    if n < 2:
        raise HuffmanError("need at least two symbols with nonzero frequency")
    parent = [0] * (n - 1)
    left = [0] * (n - 1)
    right = [0] * (n - 1)
    freq = [0] * (n - 1)
    in_count = 0
    tree_count = 0

    def take(i):
        nonlocal in_count, tree_count
        # symbol wins ties against an intermediate node
        if in_count < n and (tree_count >= i or sorted_syms[in_count].frequency <= freq[tree_count]):
            s = sorted_syms[in_count]
            in_count += 1
            return s.value, s.frequency
        f = freq[tree_count]
        parent[tree_count] = i
        tree_count += 1
        return INTERNAL_NODE, f

    for i in range(n - 1):
        left[i], fl = take(i)
        right[i], fr = take(i)
        freq[i] = fl + fr
    parent[n - 2] = 0
    return HuffTree(parent, left, right), freq


def compute_bit_length(tree: HuffTree) -> list[int]:
    """Histogram of leaf depths, walking from the root (highest index) down."""
    m = tree.node_count
    depth = [0] * m
    hist = [0] * TREE_DEPTH
    depth[m - 1] = 1
    for i in range(m - 2, -1, -1):
        depth[i] = depth[tree.parent[i]] + 1
    for i in range(m):
        for child in (tree.left[i], tree.right[i]):
            if child != INTERNAL_NODE:
                if depth[i] >= TREE_DEPTH:
                    raise HuffmanError("tree deeper than TREE_DEPTH")
                hist[depth[i]] += 1
    return hist


def kraft_sum(hist) -> float:
    from fractions import Fraction
    return sum(Fraction(c, 1 << l) for l, c in enumerate(hist) if c)


def truncate_tree(hist, max_len: int = MAX_CODEWORD_LENGTH) -> list[int]:
    """Move over-deep leaves up until no code is longer than ``max_len``."""
    h = list(hist) + [0] * (TREE_DEPTH - len(hist))
    n = sum(h)
    if n > 1 << max_len:
        raise HuffmanError(f"{n} symbols cannot fit in codes of at most {max_len} bits")
    j = max_len
    for i in range(TREE_DEPTH - 1, max_len, -1):
        while h[i] != 0:
            if j == max_len:
                j -= 1
                while h[j] == 0:
                    j -= 1
                    if j < 1:
                        raise HuffmanError("cannot truncate histogram")
            # leaf at level j becomes an internal node holding itself plus one deep leaf;
            # the deep leaf's sibling moves up a level
            h[j] -= 1
            h[j + 1] += 2
            h[i - 1] += 1
            h[i] -= 2
            j += 1
    return h


def canonize_tree(sorted_syms: list[Symbol], hist) -> list[int]:
    """Assign code lengths: the least frequent symbols get the longest codes."""
    if sum(hist) != len(sorted_syms):
        raise HuffmanError("histogram total does not match symbol count")
    bits = [0] * INPUT_SYMBOL_SIZE
    length = len(hist)
    count = 0
    for s in sorted_syms:
        while count == 0:
            length -= 1
            count = hist[length]
        bits[s.value] = length
        count -= 1
    return bits


def first_codewords(hist) -> list[int]:
    """first[l] is the numerically first codeword of length ``l``."""
    first = [0] * (MAX_CODEWORD_LENGTH + 1)
    for i in range(2, MAX_CODEWORD_LENGTH + 1):
        first[i] = (first[i - 1] + hist[i - 1]) << 1
    return first


def create_codewords(symbol_bits, hist) -> list[int]:
    """Pack ``bitreverse(code) << 5 | length`` per symbol; absent symbols get 0."""
    for l in range(MAX_CODEWORD_LENGTH + 1, len(hist)):
        if hist[l]:
            raise HuffmanError(f"codeword length {l} exceeds {MAX_CODEWORD_LENGTH}")
    nxt = first_codewords(hist)
    out = [0] * len(symbol_bits)
    for v, length in enumerate(symbol_bits):
        if length == 0:
            continue
        if length > MAX_CODEWORD_LENGTH:
            raise HuffmanError(f"codeword length {length} exceeds {MAX_CODEWORD_LENGTH}")
        code = nxt[length]
        nxt[length] += 1
        rev = bit_reverse_index(code, 32) >> (32 - length)
        out[v] = (rev << CODEWORD_LENGTH_BITS) | length
    return out


def unpack(entry: int) -> str:
    """Codeword as a '0'/'1' string in transmission order (MSB first), or '' if absent."""
    length = entry & ((1 << CODEWORD_LENGTH_BITS) - 1)
    rev = entry >> CODEWORD_LENGTH_BITS
    return "".join(str((rev >> k) & 1) for k in range(length))


def huffman_encoding(freq) -> tuple[list[int], int]:
    syms = filter_symbols(freq)
    srt = radix_sort(syms)
    tree, _ = create_tree(srt)
    hist = truncate_tree(compute_bit_length(tree))
    bits = canonize_tree(srt, hist)
    return create_codewords(bits, hist), len(syms)


def huffman_encoding_dataflow(freq_tables, concurrent: bool = True):
    """The same seven stages as a pipeline; each beat carries one whole table.

    Sorted symbols and the truncated histogram each feed two later stages, so
    the producing stage writes two copies.
    """
    tables = [list(f) for f in freq_tables]
    src = feed("freq", tables)
    s = {name: Stream(name, 2) for name in
         ("filtered", "sorted1", "sorted2", "tree", "lengths", "trunc1", "trunc2", "bits")}
    result = Stream("encoding", max(2, len(tables)))
    p = DataflowPipeline()

    def st_filter(i, o):
        o.push(filter_symbols(i.pop()))

    def st_sort(i, o1, o2):
        v = radix_sort(i.pop())
        o1.push(v)
        o2.push(list(v))

    def st_tree(i, o):
        o.push(create_tree(i.pop())[0])

    def st_len(i, o):
        o.push(compute_bit_length(i.pop()))

    def st_trunc(i, o1, o2):
        h = truncate_tree(i.pop())
        o1.push(h)
        o2.push(list(h))

    def st_canon(srt, h, o):
        o.push(canonize_tree(srt.pop(), h.pop()))

    def st_code(bits, h, o):
        b = bits.pop()
        o.push((create_codewords(b, h.pop()), sum(1 for x in b if x)))

    p.add("filter", st_filter, [src], [s["filtered"]])
    p.add("radix_sort", st_sort, [s["filtered"]], [s["sorted1"], s["sorted2"]])
    p.add("create_tree", st_tree, [s["sorted1"]], [s["tree"]])
    p.add("compute_bit_length", st_len, [s["tree"]], [s["lengths"]])
    p.add("truncate_tree", st_trunc, [s["lengths"]], [s["trunc1"], s["trunc2"]])
    p.add("canonize_tree", st_canon, [s["sorted2"], s["trunc1"]], [s["bits"]])
    p.add("create_codewords", st_code, [s["bits"], s["trunc2"]], [result])
    stats = p.run(concurrent=concurrent)
    return result.drain(), stats
