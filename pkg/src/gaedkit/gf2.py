"""Dense exact linear algebra over GF(2).

A BitMatrix stores each row as a Python int bitset (bit j = column j), which
gives word-parallel XOR row operations at any width and keeps every result
exact. Matrices are immutable once built; all operations return new values.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .gf2poly import Gf2Poly


class SingularMatrixError(ValueError):
    """Raised when an operation requires an invertible matrix and got none."""


class BitMatrix:
    """Immutable dense matrix over GF(2) with int-bitset rows."""

    __slots__ = ("rows", "cols", "_bits")

    def __init__(self, row_bits: Iterable[int], cols: int):
        bits = tuple(int(r) for r in row_bits)
        if cols < 0:
            raise ValueError("cols must be non-negative")
        limit = 1 << cols
        for r in bits:
            if r < 0 or r >= limit:
                raise ValueError("row value out of range for declared width")
        self.rows = len(bits)
        self.cols = cols
        self._bits = bits

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls((0,) * rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls((1 << i for i in range(n)), n)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        """Build from nested 0/1 sequences (row-major)."""
        if not rows:
            return cls((), 0)
        cols = len(rows[0])
        bits = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            bits.append(sum((int(v) & 1) << j for j, v in enumerate(row)))
        return cls(bits, cols)

    @classmethod
    def from_numpy(cls, arr: np.ndarray) -> "BitMatrix":
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        return cls.from_rows((a & 1).astype(np.uint8).tolist())

    @classmethod
    def random(cls, rows: int, cols: int, rng: np.random.Generator) -> "BitMatrix":
        words = (cols + 62) // 63
        bits = []
        for _ in range(rows):
            v = 0
            for w in rng.integers(0, 2**63, size=words, dtype=np.int64):
                v = (v << 63) | int(w)
            bits.append(v & ((1 << cols) - 1))
        return cls(bits, cols)

    @classmethod
    def random_invertible(cls, n: int, rng: np.random.Generator) -> "BitMatrix":
        """Uniform over the invertible matrices, by rejection."""
        while True:
            m = cls.random(n, n, rng)
            if rank(m) == n:
                return m

    # -- element access ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row_bits(self, i: int) -> int:
        return self._bits[i]

    def get(self, i: int, j: int) -> int:
        if not (0 <= j < self.cols):
            raise IndexError("column out of range")
        return (self._bits[i] >> j) & 1

    def __iter__(self):
        return iter(self._bits)

    # -- predicates and measures -------------------------------------------

    def is_zero(self) -> bool:
        return not any(self._bits)

    @property
    def weight(self) -> int:
        """Total number of nonzero entries."""
        return sum(r.bit_count() for r in self._bits)

    def __eq__(self, other) -> bool:
        return (isinstance(other, BitMatrix) and self.cols == other.cols
                and self._bits == other._bits)

    def __hash__(self) -> int:
        return hash((self.cols, self._bits))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols}, weight={self.weight})"

    # -- algebra -----------------------------------------------------------

    def __xor__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return BitMatrix((a ^ b for a, b in zip(self._bits, other._bits)), self.cols)

    __add__ = __xor__

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other._bits
        out = []
        for a in self._bits:
            acc = 0
            while a:
                low = a & -a
                acc ^= orows[low.bit_length() - 1]
                a ^= low
            out.append(acc)
        return BitMatrix(out, other.cols)

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.cols
        for i, r in enumerate(self._bits):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(cols, self.rows)

    def power(self, e: int) -> "BitMatrix":
        """Matrix power for e >= 0 (square matrices only)."""
        if self.rows != self.cols:
            raise ValueError("power requires a square matrix")
        if e < 0:
            raise ValueError("negative powers need an explicit inverse")
        result = BitMatrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def mat_vec(self, v: int) -> int:
        """Product with a column vector given as a bitset (bit i = entry i)."""
        if v < 0 or v >> self.cols:
            raise ValueError("vector out of range")
        out = 0
        for i, r in enumerate(self._bits):
            out |= ((r & v).bit_count() & 1) << i
        return out

    # -- structure ---------------------------------------------------------

    def take_rows(self, idx: Sequence[int]) -> "BitMatrix":
        return BitMatrix((self._bits[i] for i in idx), self.cols)

    def take_cols(self, idx: Sequence[int]) -> "BitMatrix":
        out = []
        for r in self._bits:
            out.append(sum(((r >> j) & 1) << p for p, j in enumerate(idx)))
        return BitMatrix(out, len(idx))

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("width mismatch")
        return BitMatrix(self._bits + other._bits, self.cols)

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self._bits):
            while r:
                low = r & -r
                out[i, low.bit_length() - 1] = 1
                r ^= low
        return out


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return a @ b


def transpose(m: BitMatrix) -> BitMatrix:
    return m.transpose()


def _echelon(bits: list[int]) -> tuple[list[int], list[int]]:
    """In-place row echelon; returns (rows, pivot column per kept row)."""
    pivots: list[int] = []
    r = 0
    for row_idx in range(len(bits)):
        v = bits[row_idx]
        for piv_row, piv_col in enumerate(pivots):
            if (v >> piv_col) & 1:
                v ^= bits[piv_row]
        if v:
            col = v.bit_length() - 1
            # reduce earlier rows so the pivot column is exclusive
            for piv_row in range(r):
                if (bits[piv_row] >> col) & 1:
                    bits[piv_row] ^= v
            bits[r] = v
            pivots.append(col)
            r += 1
    del bits[r:]
    return bits, pivots


def rank(m: BitMatrix) -> int:
    return len(_echelon(list(m))[1])


def invert(m: BitMatrix) -> BitMatrix:
    """Inverse over GF(2); raises SingularMatrixError when none exists."""
    n = m.rows
    if n != m.cols:
        raise ValueError("inverse requires a square matrix")
    # augmented rows: [row | identity] with the tracker in the high bits
    aug = [m.row_bits(i) | (1 << (n + i)) for i in range(n)]
    mask = (1 << n) - 1
    piv_of_col: dict[int, int] = {}
    for i in range(n):
        v = aug[i]
        # stored rows are mutually reduced, so one pass clears every
        # claimed pivot column from v
        for col, prow in piv_of_col.items():
            if (v >> col) & 1:
                v ^= aug[prow]
        lead = v & mask
        if not lead:
            raise SingularMatrixError("matrix is singular")
        col = lead.bit_length() - 1
        for j in range(i):
            if (aug[j] >> col) & 1:
                aug[j] ^= v
        aug[i] = v
        piv_of_col[col] = i
    out = [0] * n
    for row in aug:
        col = (row & mask).bit_length() - 1
        out[col] = row >> n
    return BitMatrix(out, n)


def null_space_basis(m: BitMatrix) -> BitMatrix:
    """Basis of {x : m @ x = 0}, one vector per row of the result.

    Vectors are emitted in ascending order of their free column, each with a
    single 1 in that free position, so the result has full row rank.
    """
    bits, pivots = _echelon(list(m))
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for f in free:
        v = 1 << f
        for row, p in zip(bits, pivots):
            if (row >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return BitMatrix(basis, m.cols)


def solve_left(m: BitMatrix, y: int) -> int | None:
    """Solve x @ m = y for a row-combination bitset x, or None if unsolvable."""
    reduced: list[tuple[int, int]] = []  # (reduced row, witness combo)
    for i in range(m.rows):
        v, w = m.row_bits(i), 1 << i
        for rv, rw in reduced:
            if (v >> (rv.bit_length() - 1)) & 1:
                v ^= rv
                w ^= rw
        if v:
            reduced.append((v, w))
            reduced.sort(key=lambda t: -t[0])
    v, w = y, 0
    for rv, rw in reduced:
        if (v >> (rv.bit_length() - 1)) & 1:
            v ^= rv
            w ^= rw
    return None if v else w


def column_reduce(h: BitMatrix) -> BitMatrix:
    """Invertible A with h @ A = [I | 0]; h must have full row rank.

    Runs Gauss-Jordan with column operations only, accumulated into A, so the
    row space of h is untouched and h @ A lands exactly on the identity block
    followed by zero columns.
    """
    m, n = h.shape
    if m > n:
        raise ValueError("more rows than columns")
    # operate on the transpose: column ops on h are row ops on h^T
    work = list(h.transpose())           # n rows of width m
    acc = [1 << i for i in range(n)]     # accumulates A^T
    for col in range(m):                 # pivot position (col, col) of h
        piv = None
        for i in range(col, n):
            if (work[i] >> col) & 1:
                piv = i
                break
        if piv is None:
            raise SingularMatrixError("parity-check matrix is rank deficient")
        work[col], work[piv] = work[piv], work[col]
        acc[col], acc[piv] = acc[piv], acc[col]
        for i in range(n):
            if i != col and (work[i] >> col) & 1:
                work[i] ^= work[col]
                acc[i] ^= acc[col]
    return BitMatrix(acc, n).transpose()


def companion_matrix(f: Gf2Poly) -> BitMatrix:
    """Companion matrix of a nonzero polynomial.

    Convention used across this package: ones on the subdiagonal and the
    coefficients of f (lowest degree first) down the last column.
    """
    d = f.degree
    if d < 1:
        raise ValueError("companion matrix needs degree >= 1")
    rows = []
    for i in range(d):
        r = (1 << (i - 1)) if i > 0 else 0
        if (f.bits >> i) & 1:
            r |= 1 << (d - 1)
        rows.append(r)
    return BitMatrix(rows, d)


def block_diagonal(blocks: Sequence[BitMatrix]) -> BitMatrix:
    rows = []
    offset = 0
    total = sum(b.cols for b in blocks)
    for b in blocks:
        if b.rows != b.cols:
            raise ValueError("blocks must be square")
        for r in b:
            rows.append(r << offset)
        offset += b.cols
    return BitMatrix(rows, total)


def char_poly(m: BitMatrix) -> Gf2Poly:
    """Characteristic polynomial via similarity reduction to Hessenberg form.

    Pivot deficiencies are handled with simultaneous row/column swaps and the
    eliminations are paired row/column updates, so the spectrum is preserved
    exactly over GF(2).
    """
    n = m.rows
    if n != m.cols:
        raise ValueError("characteristic polynomial requires a square matrix")
    if n == 0:
        return Gf2Poly(1)
    a = list(m)

    def col_xor(dst: int, src: int) -> None:
        for i in range(n):
            a[i] ^= ((a[i] >> src) & 1) << dst

    def col_swap(c1: int, c2: int) -> None:
        for i in range(n):
            b1, b2 = (a[i] >> c1) & 1, (a[i] >> c2) & 1
            if b1 != b2:
                a[i] ^= (1 << c1) | (1 << c2)

    for c in range(n - 2):
        piv = next((r for r in range(c + 1, n) if (a[r] >> c) & 1), None)
        if piv is None:
            continue
        if piv != c + 1:
            a[c + 1], a[piv] = a[piv], a[c + 1]
            col_swap(c + 1, piv)
        for r in range(c + 2, n):
            if (a[r] >> c) & 1:
                a[r] ^= a[c + 1]
                col_xor(c + 1, r)

    # p_k = (x + a_kk) p_{k-1} + sum_i a_{i,k} (prod of subdiagonals) p_{i-1}
    p = [Gf2Poly(1)]
    x = Gf2Poly(2)
    for k in range(1, n + 1):
        term = (x + Gf2Poly((a[k - 1] >> (k - 1)) & 1)) * p[k - 1]
        sub = 1
        for i in range(k - 1, 0, -1):
            sub &= (a[i] >> (i - 1)) & 1
            if not sub:
                break
            if (a[i - 1] >> (k - 1)) & 1:
                term = term + p[i - 1]
        p.append(term)
    return p[n]
