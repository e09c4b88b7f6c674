"""Binary linear block codes: construction from a parity-check matrix,
distance computation, dual-word search, and parity-check optimization.

Codewords are column vectors x with H @ x = 0; the generator G holds a basis
of that null space in its rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .gf2 import BitMatrix, null_space_basis, rank

_WORD_MASK = (1 << 64) - 1


class ReductionError(ValueError):
    """Coordinate reduction would make the automorphism matrix singular."""


class LinearCode:
    """An (n, k) binary linear code held as a parity-check/generator pair."""

    def __init__(self, h: BitMatrix, g: BitMatrix):
        if h.cols != g.cols:
            raise ValueError("H and G widths disagree")
        self.h = h
        self.g = g
        self.n = h.cols
        self.k = g.rows
        if h.rows + g.rows != self.n:
            raise ValueError("H and G dimensions do not add up to n")
        if not (h @ g.transpose()).is_zero():
            raise ValueError("G rows are not in the null space of H")
        self._cache: dict[str, np.ndarray] = {}

    @classmethod
    def from_pcm(cls, h: BitMatrix) -> "LinearCode":
        """Build a code from a full-row-rank parity-check matrix."""
        if h.rows == 0 or h.cols == 0 or h.rows >= h.cols:
            raise ValueError(f"parity-check matrix shape {h.shape} is not usable")
        if rank(h) != h.rows:
            raise ValueError("parity-check matrix is rank deficient")
        return cls(h, null_space_basis(h))

    @property
    def rate(self) -> float:
        return self.k / self.n

    def __repr__(self) -> str:
        return f"LinearCode(n={self.n}, k={self.k})"

    def h_numpy(self) -> np.ndarray:
        if "h" not in self._cache:
            arr = self.h.to_numpy()
            arr.flags.writeable = False
            self._cache["h"] = arr
        return self._cache["h"]

    def g_numpy(self) -> np.ndarray:
        if "g" not in self._cache:
            arr = self.g.to_numpy()
            arr.flags.writeable = False
            self._cache["g"] = arr
        return self._cache["g"]

    def encode(self, message) -> np.ndarray:
        """Map k message bits to the codeword combining rows of G."""
        bits = np.asarray(message, dtype=np.uint8).reshape(-1)
        if bits.size != self.k:
            raise ValueError(f"message must have {self.k} bits")
        word = 0
        for i in range(self.k):
            if bits[i] & 1:
                word ^= self.g.row_bits(i)
        return _unpack_bits(word, self.n)

    def codeword_table(self) -> np.ndarray:
        """All 2^k codewords as a (2^k, n) uint8 array; small k only."""
        if self.k > 22:
            raise ValueError("codeword table limited to k <= 22")
        if "table" not in self._cache:
            packed = _combination_table([self.g.row_bits(i) for i in range(self.k)],
                                        self.n)
            table = _unpack_array(packed, self.n)
            table.flags.writeable = False
            self._cache["table"] = table
        return self._cache["table"]

    def contains(self, word: int) -> bool:
        """Membership test for a codeword given as an int bitset."""
        return self.h.mat_vec(word) == 0


def _unpack_bits(word: int, n: int) -> np.ndarray:
    raw = np.frombuffer(word.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def _pack_rows(bits: Sequence[int], n: int) -> np.ndarray:
    """Int bitsets to a (len, ceil(n/64)) uint64 array."""
    words = max(1, (n + 63) // 64)
    out = np.empty((len(bits), words), dtype=np.uint64)
    for i, b in enumerate(bits):
        for w in range(words):
            out[i, w] = (b >> (64 * w)) & _WORD_MASK
    return out


def _unpack_array(packed: np.ndarray, n: int) -> np.ndarray:
    """(count, words) uint64 to (count, n) uint8."""
    as_bytes = packed.astype("<u8").view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return bits[:, :n].copy()


def _packed_to_int(row: np.ndarray) -> int:
    out = 0
    for w in range(row.shape[0] - 1, -1, -1):
        out = (out << 64) | int(row[w])
    return out


def _combination_table(rows: list[int], n: int) -> np.ndarray:
    """All XOR combinations of the given rows, in mask order, packed."""
    packed = _pack_rows(rows, n)
    table = np.zeros((1 << len(rows), packed.shape[1]), dtype=np.uint64)
    for i in range(len(rows)):
        table[1 << i:2 << i] = table[: 1 << i] ^ packed[i]
    return table


def _iter_combination_chunks(rows: list[int], n: int,
                             chunk_bits: int = 18) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (base_mask, packed chunk) covering all 2^len combinations."""
    low = min(len(rows), chunk_bits)
    table = _combination_table(rows[:low], n)
    high_rows = rows[low:]
    for hi in range(1 << len(high_rows)):
        base, m = 0, hi
        while m:
            b = m & -m
            base ^= high_rows[b.bit_length() - 1]
            m ^= b
        if base:
            yield hi << low, table ^ _pack_rows([base], n)[0]
        else:
            yield 0, table


def _weights(packed: np.ndarray) -> np.ndarray:
    return np.bitwise_count(packed).sum(axis=1, dtype=np.int64)


def weight_distribution(rows: list[int], n: int) -> list[int]:
    """Weight counts of the span of the given rows (must be independent)."""
    counts = np.zeros(n + 1, dtype=np.int64)
    for _, chunk in _iter_combination_chunks(rows, n):
        counts += np.bincount(_weights(chunk), minlength=n + 1)
    return counts.tolist()


def min_distance(c: LinearCode, *, max_primal: int = 26, max_dual: int = 24) -> int:
    """Minimum Hamming distance by exhaustive search.

    Enumerates the 2^k codewords when k is small; otherwise enumerates the
    2^(n-k) dual words and converts the dual weight distribution through the
    exact integer MacWilliams transform. Raises when both sides are too big.
    """
    if c.k <= max_primal:
        grows = [c.g.row_bits(i) for i in range(c.k)]
        best = c.n + 1
        for off, chunk in _iter_combination_chunks(grows, c.n):
            w = _weights(chunk)
            if off == 0:
                w[0] = c.n + 1  # the all-zero word
            m = int(w.min())
            if m < best:
                best = m
        return best
    r = c.n - c.k
    if r > max_dual:
        raise ValueError(f"instance too large: k={c.k}, n-k={r}")
    dual = weight_distribution([c.h.row_bits(i) for i in range(r)], c.n)
    dist = _macwilliams(dual, c.n, r)
    return next(j for j in range(1, c.n + 1) if dist[j] > 0)


def _macwilliams(dual_counts: list[int], n: int, dual_dim_log: int) -> list[int]:
    """Weight distribution of the code from its dual's, exact over Z."""
    out = []
    for j in range(n + 1):
        total = 0
        for w, count in enumerate(dual_counts):
            if count:
                kraw = sum((-1) ** s * comb(w, s) * comb(n - w, j - s)
                           for s in range(0, min(w, j) + 1))
                total += count * kraw
        q, rem = divmod(total, 1 << dual_dim_log)
        if rem or q < 0:
            raise AssertionError("MacWilliams transform left a remainder")
        out.append(q)
    return out


@dataclass(frozen=True)
class DualWordPool:
    """Distinct dual codewords, sorted by (weight, value).

    complete is False when a random search hit its iteration budget before
    reaching the requested number of words; enumeration is always complete.
    """

    words: tuple[int, ...]
    n: int
    complete: bool

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(w.bit_count() for w in self.words)

    def as_matrix(self) -> BitMatrix:
        return BitMatrix(self.words, self.n)


def low_weight_dual_search(c: LinearCode, target_count: int, max_weight: int,
                           seed: int = 0) -> DualWordPool:
    """Collect low-weight nonzero dual codewords.

    Full enumeration of the 2^(n-k) dual words when n-k <= 24 (the result is
    then exhaustive up to max_weight, truncated to the target count);
    otherwise a seeded random-combination search over H's rows.
    """
    if target_count < 1:
        raise ValueError("target_count must be positive")
    r = c.n - c.k
    hrows = [c.h.row_bits(i) for i in range(r)]
    if r <= 24:
        found: list[tuple[int, int]] = []
        for off, chunk in _iter_combination_chunks(hrows, c.n):
            w = _weights(chunk)
            keep = np.nonzero((w <= max_weight) & (w > 0))[0]
            found.extend((int(w[i]), _packed_to_int(chunk[i])) for i in keep)
            if len(found) > 4 * target_count:
                found.sort()
                del found[target_count:]
        found.sort()
        return DualWordPool(tuple(v for _, v in found[:target_count]), c.n, True)

    rng = np.random.default_rng(seed)
    collected = {row for row in hrows if row.bit_count() <= max_weight}
    budget = max(10_000, 400 * target_count)
    spent = 0
    mask_words = (r + 62) // 63
    mask_limit = (1 << r) - 1
    while len(collected) < target_count and spent < budget:
        batch = min(4096, budget - spent)
        spent += batch
        draws = rng.integers(0, 2**63, size=(batch, mask_words), dtype=np.int64)
        for chunk_row in draws.tolist():
            mm = 0
            for part in chunk_row:
                mm = (mm << 63) | part
            mm &= mask_limit
            word = 0
            while mm:
                b = mm & -mm
                word ^= hrows[b.bit_length() - 1]
                mm ^= b
            if word and word.bit_count() <= max_weight:
                collected.add(word)
    words = sorted(collected, key=lambda v: (v.bit_count(), v))[:target_count]
    return DualWordPool(tuple(words), c.n, len(words) >= target_count)


def check_pool(c: LinearCode, pool: DualWordPool) -> None:
    """Confirm every pool word is a dual codeword of c."""
    if pool.n != c.n:
        raise ValueError("pool length does not match the code")
    for w in pool.words:
        if c.g.mat_vec(w) != 0:
            raise ValueError("pool contains a word outside the dual code")


def four_cycle_count(m: BitMatrix) -> int:
    """Number of length-4 cycles in the bipartite adjacency graph of m."""
    total = 0
    bits = list(m)
    for i in range(len(bits)):
        for j in range(i + 1, len(bits)):
            shared = (bits[i] & bits[j]).bit_count()
            total += shared * (shared - 1) // 2
    return total


def optimize_pcm(c: LinearCode, pool: DualWordPool, trials: int = 32,
                 seed: int = 0) -> LinearCode:
    """Pick a better PCM for the same code from a pool of dual words.

    Greedy independent selection in weight order gives the minimum possible
    total weight; random tie-break order within equal weights is retried
    `trials` times and the (total weight, four-cycle count) lexicographic
    best is kept. The returned code has the identical null space.
    """
    r = c.n - c.k
    words = list(pool.words)
    check_pool(c, pool)
    if rank(BitMatrix(words, c.n)) != r:
        raise ValueError("pool does not span the dual code")
    weights = [w.bit_count() for w in words]
    rng = np.random.default_rng(seed)
    best: tuple[int, int] | None = None
    best_rows: list[int] = []
    for trial in range(max(1, trials)):
        if trial == 0:
            order = sorted(range(len(words)), key=lambda i: (weights[i], words[i]))
        else:
            jitter = rng.permutation(len(words))
            order = sorted(range(len(words)), key=lambda i: (weights[i], jitter[i]))
        pivots: dict[int, int] = {}
        chosen: list[int] = []
        for idx in order:
            v = words[idx]
            while v:
                lead = v.bit_length() - 1
                if lead in pivots:
                    v ^= pivots[lead]
                else:
                    pivots[lead] = v
                    chosen.append(idx)
                    break
            if len(chosen) == r:
                break
        rows = sorted((words[i] for i in chosen),
                      key=lambda v: (v.bit_count(), v))
        score = (sum(v.bit_count() for v in rows),
                 four_cycle_count(BitMatrix(rows, c.n)))
        if best is None or score < best:
            best, best_rows = score, rows
    new_h = BitMatrix(best_rows, c.n)
    if rank(new_h.vstack(c.h)) != r:
        raise AssertionError("optimized PCM changed the code")
    return LinearCode.from_pcm(new_h)


def reduce_zero_columns(c: LinearCode, t: BitMatrix
                        ) -> tuple[LinearCode, BitMatrix, tuple[int, ...]]:
    """Drop coordinates that are zero in every codeword.

    Such positions arise when G has all-zero columns; every codeword is zero
    there, so the code, its PCM, and the automorphism matrix t can all be
    restricted to the remaining positions. Returns (code, t, dropped
    positions); raises ReductionError when the restriction of t stops being
    invertible (t mixes frozen and active positions).
    """
    if t.shape != (c.n, c.n):
        raise ValueError("automorphism shape does not match the code")
    col_union = 0
    for i in range(c.k):
        col_union |= c.g.row_bits(i)
    frozen = tuple(j for j in range(c.n) if not (col_union >> j) & 1)
    if not frozen:
        return c, t, frozen
    active = [j for j in range(c.n) if (col_union >> j) & 1]
    t_sub = t.take_rows(active).take_cols(active)
    if rank(t_sub) != len(active):
        raise ReductionError(
            f"dropping {len(frozen)} frozen positions breaks invertibility")
    h_cut = c.h.take_cols(active)
    pivots: dict[int, int] = {}
    kept: list[int] = []
    for i in range(h_cut.rows):
        v = h_cut.row_bits(i)
        while v:
            lead = v.bit_length() - 1
            if lead in pivots:
                v ^= pivots[lead]
            else:
                pivots[lead] = v
                kept.append(h_cut.row_bits(i))
                break
    if not kept:
        raise ReductionError("reduction left a code without redundancy")
    reduced = LinearCode.from_pcm(BitMatrix(kept, len(active)))
    if reduced.k != c.k:
        raise AssertionError("reduction changed the code dimension")
    return reduced, t_sub, frozen
