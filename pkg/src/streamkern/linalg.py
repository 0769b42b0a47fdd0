"""Dense and sparse (CRS) matrix-vector products and a block-streaming matrix multiply.

Plain Python loops with ascending-k accumulation, so integer inputs give exact
results and float results are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .stream import PipelineError, Stream, EndOfStream


def _shape(m) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise ValueError("ragged matrix")
    return rows, cols


def matvec(m, v) -> list:
    rows, cols = _shape(m)
    if cols != len(v):
        raise ValueError(f"matrix has {cols} columns, vector has {len(v)} entries")
    out = []
    for i in range(rows):
        acc = 0
        for j in range(cols):
            acc += m[i][j] * v[j]
        out.append(acc)
    return out


def matmul(a, b) -> list[list]:
    n, m = _shape(a)
    m2, p = _shape(b)
    if m != m2:
        raise ValueError(f"inner dimensions differ ({m} vs {m2})")
    out = [[0] * p for _ in range(n)]
    for i in range(n):
        for j in range(p):
            acc = 0
            for k in range(m):
                acc += a[i][k] * b[k][j]
            out[i][j] = acc
    return out


@dataclass
class CrsMatrix:
    values: list
    column_index: list[int]
    row_ptr: list[int]
    n: int
    m: int

    def __post_init__(self):
        self.validate()

    @property
    def nnz(self) -> int:
        return len(self.values)

    def validate(self):
        rp = self.row_ptr
        if len(rp) != self.n + 1:
            raise ValueError("row_ptr must have n+1 entries")
        if rp[0] != 0 or rp[-1] != len(self.values):
            raise ValueError("row_ptr must start at 0 and end at nnz")
        if len(self.column_index) != len(self.values):
            raise ValueError("values and column_index lengths differ")
        for i in range(self.n):
            if rp[i + 1] < rp[i]:
                raise ValueError("row_ptr must be nondecreasing")
            cols = self.column_index[rp[i]:rp[i + 1]]
            if any(not 0 <= c < self.m for c in cols):
                raise ValueError(f"column index out of range in row {i}")
            if any(a >= b for a, b in zip(cols, cols[1:])):
                raise ValueError(f"column indices not strictly increasing in row {i}")


def dense_to_crs(m) -> CrsMatrix:
    rows, cols = _shape(m)
    values, colidx, rowptr = [], [], [0]
    for r in m:
        for j, v in enumerate(r):
            if v != 0:
                values.append(v)
                colidx.append(j)
        rowptr.append(len(values))
    return CrsMatrix(values, colidx, rowptr, rows, cols)


def crs_to_dense(a: CrsMatrix) -> list[list]:
    out = [[0] * a.m for _ in range(a.n)]
    for i in range(a.n):
        for k in range(a.row_ptr[i], a.row_ptr[i + 1]):
            out[i][a.column_index[k]] = a.values[k]
    return out


def spmv(a: CrsMatrix, x) -> list:
    a.validate()
    if len(x) != a.m:
        raise ValueError(f"vector length {len(x)} != {a.m} columns")
    y = []
    for i in range(a.n):
        acc = 0
        for k in range(a.row_ptr[i], a.row_ptr[i + 1]):
            acc += a.values[k] * x[a.column_index[k]]
        y.append(acc)
    return y


# 4x4 example with 9 nonzeros; the first row starts 3, 4 in columns 0, 1
EXAMPLE_MATRIX = [
    [3, 4, 0, 0],
    [0, 5, 9, 0],
    [2, 0, 3, 1],
    [0, 4, 0, 6],
]


@dataclass
class BlockState:
    """Caller-owned state of the block multiplier: cached A rows and call counter."""
    size: int
    block_size: int
    a_block: list = field(default_factory=list)  # block_size x size
    it: int = 0

    def __post_init__(self):
        if self.block_size < 1 or self.size % self.block_size:
            raise ValueError(f"size {self.size} not divisible by block size {self.block_size}")


def _pop(s: Stream, bs: int):
    try:
        v = s.pop()
    except EndOfStream:
        raise PipelineError(f"stream {s.name} underflow") from None
    if len(v) != bs:
        raise ValueError(f"block vector of length {len(v)}, expected {bs}")
    return v


def blockmatmul(arows: Stream, bcols: Stream, st: BlockState) -> list[list]:
    """One call: (maybe) reload the A row block, read one B column block, return the partial product.

    Beat ``k`` of ``arows`` holds ``A[r0+i][k]`` for ``i < block_size``; beat ``k``
    of ``bcols`` holds ``B[k][c0+j]``.
    """
    size, bs = st.size, st.block_size
    if st.it % (size // bs) == 0:
        a = [[0] * size for _ in range(bs)]
        for k in range(size):
            beat = _pop(arows, bs)
            for i in range(bs):
                a[i][k] = beat[i]
        st.a_block = a
    out = [[0] * bs for _ in range(bs)]
    for k in range(size):
        beat = _pop(bcols, bs)
        for i in range(bs):
            aik = st.a_block[i][k]
            for j in range(bs):
                out[i][j] += aik * beat[j]
    st.it += 1
    return out


def blocked_matmul_full(a, b, block_size: int, stats: dict | None = None) -> list[list]:
    """Stream ``a`` and ``b`` through :func:`blockmatmul` and assemble the product.

    A row blocks are sent once per block row and reused for every column block.
    ``stats`` (if given) receives call and stream-read counts.
    """
    n, m = _shape(a)
    if (n, m) != _shape(b) or n != m:
        raise ValueError("blocked multiply needs two square matrices of equal size")
    size = n
    st = BlockState(size, block_size)
    nb = size // block_size
    arows = Stream("Arows", size * nb)
    bcols = Stream("Bcols", size * nb * nb)
    for ib in range(nb):
        for k in range(size):
            arows.push([a[ib * block_size + i][k] for i in range(block_size)])
        for jb in range(nb):
            for k in range(size):
                bcols.push([b[k][jb * block_size + j] for j in range(block_size)])
    arows.close()
    bcols.close()
    out = [[0] * size for _ in range(size)]
    calls = 0
    for ib in range(nb):
        for jb in range(nb):
            blk = blockmatmul(arows, bcols, st)
            calls += 1
            for i in range(block_size):
                for j in range(block_size):
                    out[ib * block_size + i][jb * block_size + j] = blk[i][j]
    if stats is not None:
        stats.update(calls=calls, a_reads=arows.reads, b_reads=bcols.reads)
    return out
