"""Bit-packed linear algebra over GF(2).

Matrices are stored row-major in 64-bit words (LSB-first inside a word), so
row operations are word-parallel XORs on numpy uint64 arrays.  This is the
workhorse behind systematic-form reduction and re-encoding in the list
decoder, where Gaussian elimination dominates the run time.

Also provides the binary symplectic product used to compute stabilizer
syndromes of Pauli error patterns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:  # import only for annotations; channel imports us at runtime
    from .channel import PauliVector

WORD_BITS = 64
_SHIFTS = np.arange(WORD_BITS, dtype=np.uint64)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 vector into uint64 words, LSB-first.

    Args:
        bits: 1-D array-like of 0/1 values.

    Returns:
        uint64 array of length ceil(len(bits) / 64).
    """
    bits = np.asarray(bits, dtype=np.uint64) & np.uint64(1)
    nwords = (bits.size + WORD_BITS - 1) // WORD_BITS
    padded = np.zeros(nwords * WORD_BITS, dtype=np.uint64)
    padded[: bits.size] = bits
    return np.bitwise_or.reduce(padded.reshape(nwords, WORD_BITS) << _SHIFTS, axis=1)


def unpack_bits(words: np.ndarray, ncols: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`; returns a uint8 vector of length `ncols`."""
    words = np.asarray(words, dtype=np.uint64)
    bits = ((words[:, None] >> _SHIFTS) & np.uint64(1)).reshape(-1)
    return bits[:ncols].astype(np.uint8)


def _parity_words(words: np.ndarray) -> np.ndarray:
    """Elementwise parity (popcount mod 2) of uint64 values."""
    return (np.bitwise_count(words) & np.uint64(1)).astype(np.uint8)


class BitMatrix:
    """Dense binary matrix with rows packed into 64-bit words.

    Bit (r, c) lives at word c // 64, bit c % 64 of row r.  All mutating
    operations are local to the instance; instances are freely shareable
    once construction is finished.
    """

    __slots__ = ("rows", "cols", "words", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        self.words = max(1, (cols + WORD_BITS - 1) // WORD_BITS)
        if data is None:
            self.data = np.zeros((rows, self.words), dtype=np.uint64)
        else:
            if data.shape != (rows, self.words):
                raise ValueError("packed data has wrong shape")
            self.data = data

    @classmethod
    def from_dense(cls, arr) -> "BitMatrix":
        """Build from a (rows, cols) 0/1 array."""
        arr = np.atleast_2d(np.asarray(arr, dtype=np.uint8) & 1)
        rows, cols = arr.shape
        m = cls(rows, cols)
        for r in range(rows):
            m.data[r] = pack_bits(arr[r])
        return m

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        for i in range(n):
            m.set(i, i, 1)
        return m

    @classmethod
    def hstack(cls, a: "BitMatrix", b: "BitMatrix") -> "BitMatrix":
        """Concatenate columns: result = (a | b)."""
        if a.rows != b.rows:
            raise ValueError("row count mismatch")
        dense = np.concatenate([a.to_dense(), b.to_dense()], axis=1)
        return cls.from_dense(dense)

    def to_dense(self) -> np.ndarray:
        out = np.empty((self.rows, self.cols), dtype=np.uint8)
        for r in range(self.rows):
            out[r] = unpack_bits(self.data[r], self.cols)
        return out

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())

    def get(self, r: int, c: int) -> int:
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError("bit index out of range")
        return int((self.data[r, c >> 6] >> np.uint64(c & 63)) & np.uint64(1))

    def set(self, r: int, c: int, value: int) -> None:
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError("bit index out of range")
        mask = np.uint64(1) << np.uint64(c & 63)
        if value & 1:
            self.data[r, c >> 6] |= mask
        else:
            self.data[r, c >> 6] &= ~mask

    def column_bits(self, c: int) -> np.ndarray:
        """Column c as a uint8 vector over rows."""
        return ((self.data[:, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)).astype(np.uint8)

    def row_bits(self, r: int) -> np.ndarray:
        """Row r as a uint8 vector over columns."""
        return unpack_bits(self.data[r], self.cols)

    def mul_vec(self, bits) -> np.ndarray:
        """Matrix-vector product over GF(2); returns a uint8 vector of length rows."""
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.size != self.cols:
            raise ValueError("vector length does not match column count")
        packed = pack_bits(bits)
        acc = np.bitwise_xor.reduce(self.data & packed, axis=1)
        return _parity_words(acc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):  # mutable; containers should not hash it
        raise TypeError("BitMatrix is unhashable")

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True)
class GeResult:
    """Outcome of Gauss-Jordan elimination.

    `reduced` is row-equivalent to the input; every pivot column is a unit
    column.  `pivot_cols[i]` is the pivot column of row i, in discovery
    order.  `row_map[i]` is the original index of the row now at position i.
    """

    reduced: BitMatrix
    pivot_cols: tuple[int, ...]
    rank: int
    row_map: np.ndarray


def ge_reduce(matrix: BitMatrix, col_preference: Sequence[int]) -> GeResult:
    """Gauss-Jordan elimination choosing pivots greedily in preference order.

    Args:
        matrix: input matrix (not modified).
        col_preference: a permutation of range(cols); columns are scanned
            for pivots in this order.

    Returns:
        GeResult with full Gauss-Jordan form: each pivot column has exactly
        one 1, located in the row that pivoted on it.
    """
    pref = list(col_preference)
    if sorted(pref) != list(range(matrix.cols)):
        raise ValueError("col_preference must be a permutation of all column indices")
    red = matrix.copy()
    row_map = np.arange(matrix.rows)
    pivot_cols: list[int] = []
    pivot_row = 0
    for col in pref:
        if pivot_row >= matrix.rows:
            break
        colbits = red.column_bits(col)
        cand = np.nonzero(colbits[pivot_row:])[0]
        if cand.size == 0:
            continue
        src = pivot_row + int(cand[0])
        if src != pivot_row:
            red.data[[pivot_row, src]] = red.data[[src, pivot_row]]
            row_map[[pivot_row, src]] = row_map[[src, pivot_row]]
        mask = red.column_bits(col).astype(bool)
        mask[pivot_row] = False
        if mask.any():
            red.data[mask] ^= red.data[pivot_row]
        pivot_cols.append(col)
        pivot_row += 1
    return GeResult(red, tuple(pivot_cols), len(pivot_cols), row_map)


def rank(matrix: BitMatrix) -> int:
    """GF(2) rank."""
    return ge_reduce(matrix, range(matrix.cols)).rank


def nullspace_basis(matrix: BitMatrix) -> list[np.ndarray]:
    """Basis of the right null space, as uint8 vectors of length cols.

    Returns cols - rank(matrix) independent vectors v with matrix @ v = 0.
    """
    res = ge_reduce(matrix, range(matrix.cols))
    pivot_set = set(res.pivot_cols)
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        v = np.zeros(matrix.cols, dtype=np.uint8)
        v[free] = 1
        for row, col in enumerate(res.pivot_cols):
            v[col] = res.reduced.get(row, free)
        basis.append(v)
    return basis


def symplectic_syndrome(H: BitMatrix, e: "PauliVector") -> np.ndarray:
    """Syndrome of a Pauli error pattern under a symplectic check matrix.

    The first 2n columns of H are interpreted as (X-part | Z-part) for
    n = len(e); any extra columns are ignored.  Row i of the result is
    sum_j (H^X_ij * e^Z_j + H^Z_ij * e^X_j) mod 2.
    """
    n = e.n
    if H.cols < 2 * n:
        raise ValueError(f"H has {H.cols} columns, need at least {2 * n}")
    v = np.zeros(H.cols, dtype=np.uint8)
    v[:n] = e.z
    v[n : 2 * n] = e.x
    return H.mul_vec(v)
