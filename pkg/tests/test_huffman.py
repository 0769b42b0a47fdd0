import heapq
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from streamkern.huffman import (
    INTERNAL_NODE, MAX_CODEWORD_LENGTH, HuffmanError, Symbol, canonize_tree, compute_bit_length,
    create_codewords, create_tree, filter_symbols, first_codewords, huffman_encoding,
    huffman_encoding_dataflow, kraft_sum, radix_sort, truncate_tree, unpack,
)

# frequencies chosen so the tree has lengths A2 B4 C3 D2 E2 F4
RUNNING = {"A": 3, "B": 1, "C": 2, "D": 3, "E": 3, "F": 1}


def running_freqs():
    f = [0] * 256
    for ch, v in RUNNING.items():
        f[ord(ch)] = v
    return f


def oracle_cost(freqs):
    heap = [f for f in freqs if f]
    heapq.heapify(heap)
    cost = 0
    while len(heap) > 1:
        a, b = heapq.heappop(heap), heapq.heappop(heap)
        cost += a + b
        heapq.heappush(heap, a + b)
    return cost


def lengths(enc):
    return [e & 31 for e in enc]


def test_filter():
    f = [0] * 256
    f[1], f[3] = 5, 2
    assert filter_symbols(f) == [Symbol(1, 5), Symbol(3, 2)]
    assert filter_symbols([0] * 256) == []


def test_radix_sort_stable():
    syms = [Symbol(v, 7) for v in range(10)]
    assert radix_sort(syms) == syms
    r = random.Random(4)
    syms = [Symbol(v, r.choice([1, 2, 3, 1 << 31, 65536])) for v in range(200)]
    assert radix_sort(syms) == sorted(syms, key=lambda s: s.frequency)


def test_two_symbols():
    tree, freq = create_tree([Symbol(0, 1), Symbol(1, 1)])
    assert tree.left == [0] and tree.right == [1] and freq == [2]
    h = compute_bit_length(tree)
    assert h[1] == 2
    enc, n = huffman_encoding([1, 1] + [0] * 254)
    assert n == 2 and {unpack(enc[0]), unpack(enc[1])} == {"0", "1"}


def test_degenerate_rejected():
    with pytest.raises(HuffmanError):
        huffman_encoding([5] + [0] * 255)


def test_running_example_tree():
    srt = radix_sort(filter_symbols(running_freqs()))
    tree, _ = create_tree(srt)
    assert tree.node_count == 5
    for i, p in enumerate(tree.parent[:-1]):
        assert p > i
    assert tree.parent[-1] == 0
    h = compute_bit_length(tree)
    assert {l: c for l, c in enumerate(h) if c} == {2: 3, 3: 1, 4: 2}
    bits = canonize_tree(srt, h)
    assert {ch: bits[ord(ch)] for ch in RUNNING} == {"A": 2, "B": 4, "C": 3, "D": 2, "E": 2, "F": 4}


def test_first_codewords_and_table():
    bits = [0] * 256
    for ch, l in zip("ABCDEF", [2, 4, 3, 2, 2, 4]):
        bits[ord(ch)] = l
    h = [0] * 64
    for l in (2, 4, 3, 2, 2, 4):
        h[l] += 1
    assert first_codewords(h)[1:5] == [0, 0, 6, 14]
    enc = create_codewords(bits, h)
    assert {ch: unpack(enc[ord(ch)]) for ch in "ABCDEF"} == {
        "A": "00", "B": "1110", "C": "110", "D": "01", "E": "10", "F": "1111"}
    assert enc[0] == 0
    # low 5 bits hold the length, high bits the reversed code
    assert enc[ord("B")] == (0b0111 << 5) | 4


def test_codeword_length_limit():
    bits = [0] * 256
    bits[0] = 28
    h = [0] * 64
    h[28] = 1
    with pytest.raises(HuffmanError):
        create_codewords(bits, h)


def test_truncate_identity():
    h = [0] * 64
    h[2], h[3], h[4] = 3, 1, 2
    assert truncate_tree(h) == h


def test_truncate_chain():
    # fibonacci-like chain of depth 30
    h = [0] * 64
    for l in range(1, 30):
        h[l] = 1
    h[30] = 2
    t = truncate_tree(h)
    assert sum(t) == sum(h)
    assert max(l for l, c in enumerate(t) if c) <= MAX_CODEWORD_LENGTH
    assert kraft_sum(t) <= 1


def test_truncate_infeasible():
    h = [0] * 64
    h[8] = 300
    with pytest.raises(HuffmanError):
        truncate_tree(h, max_len=8)


def test_canonize_mismatch():
    with pytest.raises(HuffmanError):
        canonize_tree([Symbol(0, 1)], [0, 2] + [0] * 62)


def test_fibonacci_frequencies_get_truncated():
    fib = [1, 1]
    while len(fib) < 40:
        fib.append(fib[-1] + fib[-2])
    f = fib + [0] * (256 - 40)
    enc, n = huffman_encoding(f)
    ls = [l for l in lengths(enc) if l]
    assert n == 40 and max(ls) <= MAX_CODEWORD_LENGTH
    assert sum(Fraction(1, 1 << l) for l in ls) <= 1


def check_code(enc):
    codes = [unpack(e) for e in enc if e]
    for a in codes:
        for b in codes:
            if a is not b and a != b:
                assert not b.startswith(a)
    assert len(set(codes)) == len(codes)
    return codes


@given(st.lists(st.integers(0, 1000), min_size=256, max_size=256))
def test_random_tables(freqs):
    if sum(1 for f in freqs if f) < 2:
        return
    enc, _ = huffman_encoding(freqs)
    check_code(enc)
    ls = lengths(enc)
    assert sum(Fraction(1, 1 << l) for l in ls if l) == 1
    assert sum(f * l for f, l in zip(freqs, ls)) == oracle_cost(freqs)
    # canonical order: same length codes increase with symbol value
    by_len = {}
    for v, e in enumerate(enc):
        if e:
            by_len.setdefault(e & 31, []).append(int(unpack(e), 2))
    for vals in by_len.values():
        assert vals == sorted(vals)


def test_dataflow_matches_flat():
    r = random.Random(5)
    tables = [[r.randint(0, 50) for _ in range(256)] for _ in range(3)]
    res, stats = huffman_encoding_dataflow(tables)
    assert [e for e, _ in res] == [huffman_encoding(t)[0] for t in tables]
    assert set(stats.invocations.values()) == {3}


def test_internal_marker_only_for_nodes():
    srt = radix_sort(filter_symbols(running_freqs()))
    tree, _ = create_tree(srt)
    leaves = [c for c in tree.left + tree.right if c != INTERNAL_NODE]
    assert sorted(leaves) == sorted(ord(c) for c in RUNNING)
