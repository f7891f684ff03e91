"""Bit-packed linear algebra over GF(2).

Matrices are stored row-major as 64-bit words.  Bits beyond the last
column of the final word are kept zero (explicit masking), so word-level
xor and comparison operate on whole rows.
"""

from __future__ import annotations

import numpy as np

WORD_BITS = 64


class BitMatrix:
    """A rows x cols binary matrix packed into uint64 words."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        self.rows = rows
        self.cols = cols
        n_words = (cols + WORD_BITS - 1) // WORD_BITS
        if words is None:
            self.words = np.zeros((rows, n_words), dtype=np.uint64)
        else:
            if words.shape != (rows, n_words):
                raise ValueError("word array shape mismatch")
            self.words = words

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "BitMatrix":
        """Pack a 2-D 0/1 array."""
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise ValueError("expected a 2-D array")
        rows, cols = dense.shape
        m = cls(rows, cols)
        bits = (dense & 1).astype(np.uint64)
        for w in range(m.words.shape[1]):
            chunk = bits[:, w * WORD_BITS : (w + 1) * WORD_BITS]
            shifts = np.arange(chunk.shape[1], dtype=np.uint64)
            m.words[:, w] = np.bitwise_or.reduce(chunk << shifts, axis=1)
        return m

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r in range(self.rows):
            for c in range(self.cols):
                out[r, c] = self.get(r, c)
        return out

    def get(self, r: int, c: int) -> int:
        self._check(r, c)
        return int(self.words[r, c // WORD_BITS] >> np.uint64(c % WORD_BITS)) & 1

    def set(self, r: int, c: int, value: int) -> None:
        self._check(r, c)
        mask = np.uint64(1) << np.uint64(c % WORD_BITS)
        if value & 1:
            self.words[r, c // WORD_BITS] |= mask
        else:
            self.words[r, c // WORD_BITS] &= ~mask

    def _check(self, r: int, c: int) -> None:
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"({r}, {c}) out of bounds for {self.rows}x{self.cols}")

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.words.copy())

    def swap_rows(self, a: int, b: int) -> None:
        self.words[[a, b]] = self.words[[b, a]]

    def xor_row_into(self, src: int, dst: int) -> None:
        """dst <- dst xor src; preserves the row span."""
        self.words[dst] ^= self.words[src]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.words, other.words))
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def rank(m: BitMatrix) -> int:
    """GF(2) rank by Gaussian elimination on a scratch copy."""
    work = m.words.copy()
    n_rows = m.rows
    r = 0
    for c in range(m.cols):
        w, b = c // WORD_BITS, np.uint64(c % WORD_BITS)
        col = (work[:, w] >> b) & np.uint64(1)
        hits = np.flatnonzero(col[r:])
        if hits.size == 0:
            continue
        pivot = r + int(hits[0])
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
            col[[r, pivot]] = col[[pivot, r]]
        col[r] = 0
        work[np.flatnonzero(col)] ^= work[r]
        r += 1
        if r == n_rows:
            break
    return r


def symplectic_product(a, b) -> int:
    """1 iff the two Pauli strings anticommute (signs ignored)."""
    if a.sites != b.sites:
        raise ValueError(f"length mismatch: {a.sites} != {b.sites}")
    n = int(np.count_nonzero(a.x & b.z)) + int(np.count_nonzero(a.z & b.x))
    return n & 1
