"""Software models of streaming hardware kernels: fixed point, FIR, CORDIC, FFT,
sparse/blocked linear algebra, scan, sorting, Huffman, 2-D filtering, and a
small pipeline performance model."""

__version__ = "0.1.0"
