"""Seeded Monte-Carlo frame-error-rate sweeps with CSV output.

Each Eb/N0 point is simulated in rounds of fixed chunk layout; every chunk
owns an RNG stream keyed by (seed, point index, chunk index), and stopping
is decided only at round boundaries. Error counts are therefore identical
for any worker count, and byte-identical CSV (modulo the wall-clock column)
follows from an identical (config, seed) pair.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .automorphisms import GeneralizedAutomorphism, verify_automorphism
from .channel import awgn_llr_batch, LlrVector
from .codes import DualWordPool, LinearCode, low_weight_dual_search
from .decoders import (BpConfig, GaedEnsemble, _check_mask, bp_min_sum_batch,
                       osd_decode, power_ensemble, stack_redundant_pcm)
from .gf2 import BitMatrix

CSV_HEADER = "ebno_db,frames,frame_errors,bit_errors,fer,ci95,elapsed_s"

# chunks per scheduling round and the frames in each chunk of round r;
# fixed constants so counts never depend on the worker count
_CHUNKS_PER_ROUND = 8
_DECODE_CELL_BUDGET = 1 << 21
_POOL_SEED = 0


def _round_chunk_frames(round_idx: int) -> int:
    return min(8192, 256 << round_idx)


@dataclass(frozen=True)
class DecoderSpec:
    """Which decoder a sweep runs, with its tuning parameters."""

    kind: str
    iterations: int = 20
    normalization: float = 0.75
    early_stop: bool = True
    ell: int = 3
    osd_order: int = 3
    powers: tuple[int, ...] = (0, 1, -1)

    def __post_init__(self) -> None:
        if self.kind not in ("bp", "gaed", "rr", "osd"):
            raise ValueError(f"unknown decoder kind {self.kind!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not 0.0 < self.normalization <= 1.0:
            raise ValueError("normalization must be in (0, 1]")
        if self.ell < 1:
            raise ValueError("ell must be at least 1")
        if self.osd_order < 0:
            raise ValueError("osd_order must be non-negative")
        if not self.powers:
            raise ValueError("powers must be non-empty")

    @property
    def label(self) -> str:
        if self.kind == "bp":
            return f"BP-{self.iterations}"
        if self.kind == "gaed":
            return f"GAED-{len(self.powers)}-BP-{self.iterations}"
        if self.kind == "rr":
            return f"R-{self.ell}-BP-{self.iterations}"
        return f"OSD-{self.osd_order}"


@dataclass(frozen=True)
class SweepConfig:
    """Sweep grid, stopping rule, seeding and parallelism."""

    ebn0_db: tuple[float, ...]
    min_frame_errors: int = 300
    max_frames: int = 1_000_000
    seed: int = 0
    workers: int = 1
    random_codewords: bool = False

    def __post_init__(self) -> None:
        pts = tuple(float(x) for x in self.ebn0_db)
        if not pts:
            raise ValueError("need at least one Eb/N0 point")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("Eb/N0 points must be strictly increasing")
        if self.min_frame_errors < 1:
            raise ValueError("min_frame_errors must be at least 1")
        if self.max_frames < 1:
            raise ValueError("max_frames must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        object.__setattr__(self, "ebn0_db", pts)


@dataclass(frozen=True)
class FerRecord:
    """One CSV row: counts and frame-error rate at a single Eb/N0."""

    ebno_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    fer: float
    ci95: float
    elapsed_s: float


def _make_payload(code: LinearCode, spec: DecoderSpec,
                  aut: GeneralizedAutomorphism | None,
                  pool: DualWordPool | None) -> dict:
    payload = {
        "h_rows": list(code.h), "n": code.n,
        "kind": spec.kind, "iterations": spec.iterations,
        "normalization": spec.normalization, "early_stop": spec.early_stop,
        "ell": spec.ell, "osd_order": spec.osd_order,
        "powers": tuple(spec.powers),
    }
    if spec.kind == "gaed":
        if aut is None:
            raise ValueError("gaed sweeps need an automorphism")
        if not verify_automorphism(code, aut.matrix):
            raise ValueError("matrix is not an automorphism of the code")
        payload["t_rows"] = list(aut.matrix)
    if spec.kind == "rr":
        if pool is None:
            need = spec.ell * (code.n - code.k)
            pool = low_weight_dual_search(code, target_count=need + 32,
                                          max_weight=code.n, seed=_POOL_SEED)
        payload["pool_words"] = list(pool.words)
    return payload


class _Runtime:
    """Per-process decoder state rebuilt from a picklable payload."""

    def __init__(self, payload: dict):
        n = payload["n"]
        self.code = LinearCode.from_pcm(BitMatrix(payload["h_rows"], n))
        self.g_np = self.code.g_numpy().astype(np.int32)
        self.cfg = BpConfig(iterations=payload["iterations"],
                            normalization=payload["normalization"],
                            early_stop=payload["early_stop"])
        kind = payload["kind"]
        if kind == "bp":
            mask = _check_mask(self.code.h)
        elif kind == "gaed":
            aut = GeneralizedAutomorphism.from_matrix(
                BitMatrix(payload["t_rows"], n))
            self.ens = GaedEnsemble(self.code, power_ensemble(
                aut, payload["powers"]))
            mask = self.ens.mask
        elif kind == "rr":
            pool = DualWordPool(tuple(payload["pool_words"]), n, True)
            mask = _check_mask(stack_redundant_pcm(self.code, pool,
                                                   payload["ell"]))
        else:
            mask = self.code.h_numpy().astype(bool)
        self.kind = kind
        self.mask = mask
        self.osd_order = payload["osd_order"]
        self.batch_frames = max(
            32, _DECODE_CELL_BUDGET // max(1, mask.shape[0] * n))

    def _decode(self, llrs: np.ndarray) -> np.ndarray:
        if self.kind == "gaed":
            return self.ens.decode_batch(llrs, self.cfg)[0]
        if self.kind == "osd":
            out = np.empty((llrs.shape[0], self.code.n), dtype=np.uint8)
            for f in range(llrs.shape[0]):
                out[f] = osd_decode(self.code, LlrVector(llrs[f]),
                                    self.osd_order).hard_bits
            return out
        return bp_min_sum_batch(self.mask, llrs, self.cfg)[0]

    def run_chunk(self, ebn0_db: float, frames: int,
                  rng: np.random.Generator,
                  random_codewords: bool) -> tuple[int, int, int]:
        rate = self.code.rate
        frame_errors = bit_errors = 0
        left = frames
        while left > 0:
            b = min(self.batch_frames, left)
            if random_codewords:
                msgs = rng.integers(0, 2, size=(b, self.code.k),
                                    dtype=np.uint8)
                sent = ((msgs.astype(np.int32) @ self.g_np) & 1
                        ).astype(np.uint8)
            else:
                sent = np.zeros((b, self.code.n), dtype=np.uint8)
            llrs = awgn_llr_batch(sent, ebn0_db, rate, rng)
            diff = self._decode(llrs) != sent
            frame_errors += int(diff.any(axis=1).sum())
            bit_errors += int(diff.sum())
            left -= b
        return frames, frame_errors, bit_errors


_RUNTIME: _Runtime | None = None


def _init_worker(payload: dict) -> None:
    global _RUNTIME
    _RUNTIME = _Runtime(payload)


def _pool_task(args) -> tuple[int, int, int]:
    seed, random_codewords, point_idx, chunk_idx, ebn0_db, frames = args
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=(seed, point_idx, chunk_idx)))
    return _RUNTIME.run_chunk(ebn0_db, frames, rng, random_codewords)


def run_sweep(code: LinearCode, spec: DecoderSpec, cfg: SweepConfig, *,
              aut: GeneralizedAutomorphism | None = None,
              pool: DualWordPool | None = None,
              timer=time.perf_counter) -> list[FerRecord]:
    """Frame-error-rate estimates per Eb/N0 point.

    Each point accumulates chunk rounds until min_frame_errors errors or
    max_frames frames are reached; counts are invariant to workers.
    """
    payload = _make_payload(code, spec, aut, pool)
    executor = None
    runtime = None
    if cfg.workers > 1:
        executor = ProcessPoolExecutor(max_workers=cfg.workers,
                                       initializer=_init_worker,
                                       initargs=(payload,))
    else:
        runtime = _Runtime(payload)
    try:
        records = []
        for point_idx, ebn0 in enumerate(cfg.ebn0_db):
            start = timer()
            frames = frame_errors = bit_errors = 0
            round_idx = chunk_idx = 0
            while (frame_errors < cfg.min_frame_errors
                   and frames < cfg.max_frames):
                budget = cfg.max_frames - frames
                sizes = []
                for _ in range(_CHUNKS_PER_ROUND):
                    s = min(_round_chunk_frames(round_idx), budget)
                    if s <= 0:
                        break
                    sizes.append(s)
                    budget -= s
                tasks = [(cfg.seed, cfg.random_codewords, point_idx,
                          chunk_idx + i, ebn0, s)
                         for i, s in enumerate(sizes)]
                chunk_idx += len(sizes)
                round_idx += 1
                if executor is not None:
                    results = list(executor.map(_pool_task, tasks))
                else:
                    results = []
                    for t in tasks:
                        rng = np.random.default_rng(np.random.SeedSequence(
                            entropy=(t[0], t[2], t[3])))
                        results.append(runtime.run_chunk(t[4], t[5], rng,
                                                         t[1]))
                for f, e, b in results:
                    frames += f
                    frame_errors += e
                    bit_errors += b
            fer = frame_errors / frames
            ci = 1.96 * sqrt(fer * (1.0 - fer) / frames)
            records.append(FerRecord(float(ebn0), frames, frame_errors,
                                     bit_errors, fer, ci, timer() - start))
    finally:
        if executor is not None:
            executor.shutdown()
    return records


def format_records(records) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(f"{r.ebno_db:.6g},{r.frames},{r.frame_errors},"
                     f"{r.bit_errors},{r.fer:.6g},{r.ci95:.6g},"
                     f"{r.elapsed_s:.6g}")
    return "\n".join(lines) + "\n"


def write_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_records(records))
