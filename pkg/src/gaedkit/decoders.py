"""Decoders: box-plus preprocessing, min-sum BP, ensembles, OSD, ML.

All iterative decoding runs through one batched dense kernel so a single
frame and a batch member follow bit-identical arithmetic. Ensemble paths
preprocess the channel LLRs through an automorphism (box-plus per output
coordinate), decode independently, map the hard decisions back through the
inverse matrix, and keep the most likely candidate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .automorphisms import GeneralizedAutomorphism, verify_automorphism
from .channel import LLR_CLAMP, LlrVector
from .codes import DualWordPool, LinearCode
from .gf2 import BitMatrix, rank


def _pair_box_plus(a, b):
    # Exact identity for 2*atanh(tanh(a/2)*tanh(b/2)), stable for large inputs.
    m = np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    return m + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))


def box_plus(llrs, clamp: float = LLR_CLAMP) -> float:
    """LLR of the modulo-2 sum of independent bits with the given LLRs."""
    arr = np.asarray(llrs, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("box_plus needs a non-empty sequence of LLRs")
    acc = arr[0]
    for x in arr[1:]:
        acc = _pair_box_plus(acc, x)
    return float(np.clip(acc, -clamp, clamp))


class PreprocessPlan:
    """Box-plus schedule for one matrix, rows grouped by degree.

    Output coordinate j combines the input LLRs selected by row j. Rows of
    degree 1 copy their input bit-for-bit, so a permutation matrix yields an
    exact coordinate permutation.
    """

    def __init__(self, t: BitMatrix):
        if t.rows != t.cols:
            raise ValueError("preprocessing matrix must be square")
        self.n = t.rows
        by_degree: dict[int, tuple[list[int], list[list[int]]]] = {}
        for j in range(self.n):
            cols = [i for i in range(self.n) if t.get(j, i)]
            if not cols:
                raise ValueError(f"row {j} of the preprocessing matrix is zero")
            rows, sels = by_degree.setdefault(len(cols), ([], []))
            rows.append(j)
            sels.append(cols)
        self.groups = [(np.array(rows), np.array(sels))
                       for _, (rows, sels) in sorted(by_degree.items())]

    def apply(self, llrs: np.ndarray, clamp: float = LLR_CLAMP) -> np.ndarray:
        """Transform a (frames, n) LLR array; pure function of its input."""
        if llrs.shape[-1] != self.n:
            raise ValueError("LLR length does not match the matrix")
        out = np.empty_like(llrs)
        for rows, sels in self.groups:
            if sels.shape[1] == 1:
                out[:, rows] = llrs[:, sels[:, 0]]
                continue
            acc = llrs[:, sels[:, 0]]
            for col in range(1, sels.shape[1]):
                acc = _pair_box_plus(acc, llrs[:, sels[:, col]])
            out[:, rows] = np.clip(acc, -clamp, clamp)
        return out


def preprocess_llrs(t: GeneralizedAutomorphism, llrs: LlrVector) -> LlrVector:
    """Per-coordinate box-plus combination of the LLRs selected by t's rows."""
    if t.n != len(llrs):
        raise ValueError("LLR length does not match the automorphism")
    out = PreprocessPlan(t.matrix).apply(llrs.values[None, :], llrs.clamp)
    return LlrVector(out[0], llrs.clamp)


@dataclass(frozen=True)
class BpConfig:
    """Normalized min-sum settings; flooding is the only schedule."""

    iterations: int
    normalization: float = 0.75
    early_stop: bool = True
    clamp: float = LLR_CLAMP
    schedule: str = "flooding"

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not 0.0 < self.normalization <= 1.0:
            raise ValueError("normalization must be in (0, 1]")
        if self.clamp <= 0:
            raise ValueError("clamp must be positive")
        if self.schedule != "flooding":
            raise ValueError(f"unsupported schedule {self.schedule!r}")


@dataclass(frozen=True)
class DecodeOutcome:
    """Hard decision plus bookkeeping shared by every decoder."""

    hard_bits: np.ndarray
    is_codeword: bool
    iterations_used: int
    path_index: int
    correlation: float

    def __post_init__(self) -> None:
        bits = np.ascontiguousarray(self.hard_bits, dtype=np.uint8)
        bits.flags.writeable = False
        object.__setattr__(self, "hard_bits", bits)


def _check_mask(h: BitMatrix) -> np.ndarray:
    if h.rows < 1 or h.cols < 1:
        raise ValueError("empty Tanner graph")
    mask = h.to_numpy().astype(bool)
    if not mask.any(axis=1).all():
        raise ValueError("parity-check matrix has an empty row")
    return mask


def bp_min_sum_batch(mask: np.ndarray, llrs: np.ndarray, cfg: BpConfig
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flooding normalized min-sum over a dense (checks, n) adjacency mask.

    Returns (hard_bits, is_codeword, iterations_used) arrays over the batch.
    Converged frames drop out of the working set when early_stop is on;
    otherwise every frame runs all iterations and reports its final state.
    """
    n_frames, n = llrs.shape
    out_hard = np.empty((n_frames, n), dtype=np.uint8)
    out_valid = np.zeros(n_frames, dtype=bool)
    out_iters = np.full(n_frames, cfg.iterations, dtype=np.int64)
    if n_frames == 0:
        return out_hard, out_valid, out_iters
    idx = np.arange(n_frames)
    chan = llrs
    # v->c messages start as the channel LLRs on every edge
    v_msg = np.where(mask[None], chan[:, None, :], 0.0)
    col_ids = np.arange(n)
    for it in range(1, cfg.iterations + 1):
        mags = np.where(mask[None], np.abs(v_msg), np.inf)
        first = mags.argmin(axis=2)
        min1 = np.take_along_axis(mags, first[:, :, None], 2)[:, :, 0]
        np.put_along_axis(mags, first[:, :, None], np.inf, 2)
        min2 = mags.min(axis=2)
        neg = np.signbit(v_msg) & mask[None]
        row_sign = np.where((neg.sum(axis=2) & 1).astype(bool), -1.0, 1.0)
        ext_sign = np.where(neg, -row_sign[:, :, None], row_sign[:, :, None])
        # min over the other neighbors; saturates at the clamp for rows of
        # degree 1, whose "other" set is empty
        ext_mag = np.minimum(
            np.where(col_ids[None, None, :] == first[:, :, None],
                     min2[:, :, None], min1[:, :, None]), cfg.clamp)
        c_msg = np.where(mask[None], cfg.normalization * ext_sign * ext_mag, 0.0)
        total = chan + c_msg.sum(axis=1)
        hard = total < 0.0
        parity = (hard[:, None, :] & mask[None]).sum(axis=2) & 1
        valid = ~parity.any(axis=1)
        if it == cfg.iterations:
            out_hard[idx] = hard
            out_valid[idx] = valid
            break
        if cfg.early_stop and valid.any():
            done_idx = idx[valid]
            out_hard[done_idx] = hard[valid]
            out_valid[done_idx] = True
            out_iters[done_idx] = it
            live = ~valid
            if not live.any():
                break
            idx, chan = idx[live], chan[live]
            total, c_msg = total[live], c_msg[live]
        v_msg = np.where(mask[None],
                         np.clip(total[:, None, :] - c_msg,
                                 -cfg.clamp, cfg.clamp), 0.0)
    return out_hard, out_valid, out_iters


def _correlation(hard: np.ndarray, llrs: np.ndarray) -> np.ndarray:
    return ((1.0 - 2.0 * hard.astype(np.float64)) * llrs).sum(axis=-1)


def bp_min_sum(h: BitMatrix, llrs: LlrVector, cfg: BpConfig) -> DecodeOutcome:
    """Decode one frame; h may carry redundant rows."""
    mask = _check_mask(h)
    if h.cols != len(llrs):
        raise ValueError("LLR length does not match the matrix")
    hard, valid, iters = bp_min_sum_batch(mask, llrs.values[None, :], cfg)
    corr = _correlation(hard[0], llrs.values)
    return DecodeOutcome(hard[0], bool(valid[0]), int(iters[0]), 0, float(corr))


class GaedEnsemble:
    """Automorphism ensemble decoder with an ML-in-the-list final choice.

    Each path preprocesses the channel LLRs through its matrix, runs BP on
    the code's PCM, and maps the hard decision back through the inverse.
    The winner maximizes correlation with the channel LLRs among
    syndrome-valid candidates when any exist, else among all candidates;
    ties go to the lowest path index.
    """

    def __init__(self, code: LinearCode, auts,
                 validate: bool = True):
        auts = list(auts)
        if not auts:
            raise ValueError("ensemble needs at least one path")
        for a in auts:
            if a.n != code.n:
                raise ValueError("automorphism size does not match the code")
            if validate and not verify_automorphism(code, a.matrix):
                raise ValueError("matrix is not an automorphism of the code")
        self.code = code
        self.mask = _check_mask(code.h)
        self.plans = [PreprocessPlan(a.matrix) for a in auts]
        self.inv_maps = [np.ascontiguousarray(
            a.inverse.to_numpy().astype(np.int32).T) for a in auts]
        self.h_t = np.ascontiguousarray(code.h_numpy().astype(np.int32).T)

    @property
    def num_paths(self) -> int:
        return len(self.plans)

    def decode_batch(self, llrs: np.ndarray, cfg: BpConfig
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray,
                                np.ndarray, np.ndarray]:
        """Returns (hard_bits, is_codeword, iterations, path_index, corr)."""
        n_frames = llrs.shape[0]
        paths = self.num_paths
        hards = np.empty((paths, n_frames, self.code.n), dtype=np.uint8)
        valids = np.empty((paths, n_frames), dtype=bool)
        iters = np.empty((paths, n_frames), dtype=np.int64)
        corrs = np.empty((paths, n_frames), dtype=np.float64)
        for p, (plan, inv_map) in enumerate(zip(self.plans, self.inv_maps)):
            pre = plan.apply(llrs, cfg.clamp)
            hard, _, used = bp_min_sum_batch(self.mask, pre, cfg)
            mapped = ((hard.astype(np.int32) @ inv_map) & 1).astype(np.uint8)
            syndrome = (mapped.astype(np.int32) @ self.h_t) & 1
            hards[p] = mapped
            valids[p] = ~syndrome.any(axis=1)
            iters[p] = used
            corrs[p] = _correlation(mapped, llrs)
        any_valid = valids.any(axis=0)
        score = np.where(valids == any_valid[None, :], corrs, -np.inf)
        sel = score.argmax(axis=0)
        frame_ids = np.arange(n_frames)
        return (hards[sel, frame_ids], valids[sel, frame_ids],
                iters[sel, frame_ids], sel, corrs[sel, frame_ids])


def power_ensemble(aut: GeneralizedAutomorphism, powers=(0, 1, -1)
                   ) -> list[GeneralizedAutomorphism]:
    """Ensemble members t^alpha for the given exponents, in order."""
    return [GeneralizedAutomorphism.from_matrix(aut.power(a)) for a in powers]


def gaed_decode(code: LinearCode, auts, llrs: LlrVector,
                cfg: BpConfig) -> DecodeOutcome:
    """Single-frame ensemble decode; see GaedEnsemble for the batch form."""
    ens = GaedEnsemble(code, auts)
    hard, valid, iters, path, corr = ens.decode_batch(llrs.values[None, :], cfg)
    return DecodeOutcome(hard[0], bool(valid[0]), int(iters[0]),
                         int(path[0]), float(corr[0]))


def stack_redundant_pcm(code: LinearCode, pool: DualWordPool,
                        ell: int) -> BitMatrix:
    """Overcomplete PCM of ell*(n-k) low-weight dual words spanning the dual.

    A minimum-weight basis is chosen first so the stack always spans, then
    the remaining slots take the lightest unused pool words; the result is
    sorted by (weight, value).
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    need = ell * (code.n - code.k)
    if len(pool.words) < need:
        raise ValueError(f"pool has {len(pool.words)} words, need {need}")
    pivots: dict[int, int] = {}
    basis: list[int] = []
    rest: list[int] = []
    for w in pool.words:
        v = w
        while v:
            lead = v.bit_length() - 1
            if lead in pivots:
                v ^= pivots[lead]
            else:
                pivots[lead] = v
                basis.append(w)
                break
        else:
            rest.append(w)
    if len(basis) < code.n - code.k:
        raise ValueError("pool does not span the dual code")
    chosen = basis + rest[: need - len(basis)]
    if len(chosen) < need:
        raise ValueError("pool too small after the spanning basis")
    chosen.sort(key=lambda w: (w.bit_count(), w))
    stacked = BitMatrix(chosen, code.n)
    if rank(stacked) != code.n - code.k:
        raise AssertionError("stacked PCM lost rank")
    return stacked


def redundant_row_decode(code: LinearCode, pool: DualWordPool, ell: int,
                         llrs: LlrVector, cfg: BpConfig) -> DecodeOutcome:
    """BP over an overcomplete PCM drawn from a low-weight dual-word pool."""
    return bp_min_sum(stack_redundant_pcm(code, pool, ell), llrs, cfg)


@lru_cache(maxsize=32)
def _flip_patterns(k: int, order: int) -> tuple[np.ndarray, ...]:
    groups = []
    for w in range(1, order + 1):
        combos = list(itertools.combinations(range(k), w))
        if combos:
            groups.append(np.array(combos, dtype=np.int64))
    return tuple(groups)


def osd_decode(code: LinearCode, llrs: LlrVector, order: int) -> DecodeOutcome:
    """Ordered-statistics decoding of the given order.

    Re-encodes every flip pattern of weight at most `order` on the most
    reliable independent positions and keeps the candidate with the highest
    correlation to the channel LLRs. Candidate enumeration is ordered by
    weight then lexicographic pattern, so ties resolve deterministically.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if len(llrs) != code.n:
        raise ValueError("LLR length does not match the code")
    vals = llrs.values
    perm = np.argsort(-np.abs(vals), kind="stable")
    work = code.g_numpy()[:, perm].copy()
    k, n = work.shape
    # Gauss-Jordan onto the leftmost (most reliable) independent columns
    basis_cols = []
    r = 0
    for col in range(n):
        if r == k:
            break
        hit = np.flatnonzero(work[r:, col]) + r
        if hit.size == 0:
            continue
        if hit[0] != r:
            work[[r, hit[0]]] = work[[hit[0], r]]
        others = np.flatnonzero(work[:, col])
        for row in others:
            if row != r:
                work[row] ^= work[r]
        basis_cols.append(col)
        r += 1
    if r != k:
        raise AssertionError("generator lost rank during OSD reduction")
    hard_sorted = (vals[perm] < 0).astype(np.uint8)
    base = (hard_sorted[basis_cols].astype(np.int32) @ work.astype(np.int32)
            & 1).astype(np.uint8)
    weights = vals[perm]
    best_cand = base
    best_corr = float(((1.0 - 2.0 * base) * weights).sum())
    for combos in _flip_patterns(k, order):
        flips = work[combos[:, 0]]
        for c in range(1, combos.shape[1]):
            flips = flips ^ work[combos[:, c]]
        cands = base[None, :] ^ flips
        corrs = (1.0 - 2.0 * cands.astype(np.float64)) @ weights
        top = int(corrs.argmax())
        if corrs[top] > best_corr:
            best_corr = float(corrs[top])
            best_cand = cands[top]
    out = np.empty(n, dtype=np.uint8)
    out[perm] = best_cand
    return DecodeOutcome(out, True, 0, 0, best_corr)


def ml_decode_batch(code: LinearCode, llrs: np.ndarray) -> np.ndarray:
    """Exhaustive maximum-likelihood decisions for a (frames, n) batch."""
    table = code.codeword_table()
    signs = 1.0 - 2.0 * table.astype(np.float64)
    picks = (llrs @ signs.T).argmax(axis=1)
    return table[picks]


def ml_decode(code: LinearCode, llrs: LlrVector) -> DecodeOutcome:
    """Exhaustive maximum-likelihood decoding over the codeword table."""
    hard = ml_decode_batch(code, llrs.values[None, :])[0]
    return DecodeOutcome(hard, True, 0, 0,
                         float(_correlation(hard, llrs.values)))
