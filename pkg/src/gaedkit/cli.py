"""Command-line front end: construct, simulate, verify, dmin.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 construction
budget exhaustion.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .automorphisms import (ConstructionError, GeneralizedAutomorphism,
                            construct_code_with_automorphism,
                            verify_automorphism)
from .codes import LinearCode, min_distance
from .gf2 import BitMatrix, SingularMatrixError, invert, rank
from .matio import (read_alist, read_dense, read_kv, write_alist, write_dense,
                    write_kv)
from .sweep import DecoderSpec, SweepConfig, format_records, run_sweep

_USAGE, _VALIDATION, _BUDGET = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1 (argparse's default would be 2)
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(_USAGE)


def _build_parser() -> _Parser:
    p = _Parser(prog="gaedkit",
                description="Construct codes with designed automorphisms, "
                            "verify them, and run FER sweeps.")
    sub = p.add_subparsers(dest="command", required=True,
                           parser_class=_Parser)

    c = sub.add_parser("construct",
                       help="build a code with a sparse automorphism")
    c.add_argument("-n", type=int, required=True, help="code length")
    c.add_argument("-k", type=int, required=True, help="code dimension")
    c.add_argument("--delta", type=int, default=0,
                   help="nonzero entries of T beyond a permutation")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-resamples", type=int, default=200)
    c.add_argument("--out", required=True, help="output directory")

    s = sub.add_parser("simulate", help="run an FER sweep from a config file")
    s.add_argument("config", help="key = value configuration file")

    v = sub.add_parser("verify",
                       help="re-check the invariants of a construct output")
    v.add_argument("code_dir")

    d = sub.add_parser("dmin", help="minimum distance of a code given its PCM")
    d.add_argument("matrix", help="parity-check matrix file")
    d.add_argument("--format", choices=("auto", "dense", "alist"),
                   default="auto")
    return p


def _cmd_construct(args, parser: _Parser) -> int:
    if args.n < 2 or not 0 < args.k < args.n:
        parser.error(f"need 0 < k < n, got n={args.n} k={args.k}")
    if args.delta < 0:
        parser.error("delta must be non-negative")
    try:
        res = construct_code_with_automorphism(
            args.n, args.k, delta_obj=args.delta, seed=args.seed,
            max_resamples=args.max_resamples)
    except ConstructionError as e:
        print(f"construction failed: {e}", file=sys.stderr)
        return _BUDGET
    except ValueError as e:
        return _fail(str(e))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    code, aut = res.code, res.aut
    write_dense(code.h, out / "H.txt")
    write_alist(code.h, out / "H.alist")
    write_dense(aut.matrix, out / "T.txt")
    write_dense(aut.inverse, out / "T_inv.txt")
    write_dense(res.t_squared, out / "T_sq.txt")
    write_dense(res.ccm.basis, out / "A.txt")
    write_kv({
        "n": args.n, "k": args.k, "delta": args.delta, "seed": args.seed,
        "code_n": code.n, "code_k": code.k,
        "omega_t": aut.omega, "omega_t_inv": aut.inverse.weight,
        "omega_t_sq": res.t_squared.weight, "delta_t": aut.delta,
        "pre_reduction_omega": res.pre_reduction_omega,
        "attempts": res.attempts,
        "ordering_failures": res.ordering_failures,
        "reduction_failures": res.reduction_failures,
        "frozen_positions": ",".join(map(str, res.frozen_positions)),
    }, out / "manifest.txt")
    print(f"constructed ({code.n},{code.k}) code in {out}")
    print(f"omega(T)={aut.omega} omega(T^-1)={aut.inverse.weight} "
          f"omega(T^2)={res.t_squared.weight} delta(T)={aut.delta}")
    print(f"attempts={res.attempts} ordering_failures={res.ordering_failures} "
          f"reduction_failures={res.reduction_failures} "
          f"dropped_positions={len(res.frozen_positions)}")
    return 0


def _read_matrix(path: Path, fmt: str = "auto") -> BitMatrix:
    if fmt == "alist" or (fmt == "auto" and path.suffix == ".alist"):
        return read_alist(path)
    return read_dense(path)


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return _VALIDATION


_BOOL_WORDS = {"true": True, "false": False, "1": True, "0": False,
               "yes": True, "no": False}

_SIM_KEYS = {"dir", "h", "t", "decoder", "iterations", "normalization",
             "early_stop", "ell", "osd_order", "gaed_powers", "ebn0_db",
             "min_frame_errors", "max_frames", "seed", "workers",
             "random_codewords", "out"}


def _cmd_simulate(args) -> int:
    try:
        raw = read_kv(args.config)
    except (OSError, ValueError) as e:
        return _fail(str(e))
    unknown = set(raw) - _SIM_KEYS
    if unknown:
        return _fail(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        base = Path(args.config).resolve().parent
        if "dir" in raw:
            code_dir = (base / raw["dir"]).resolve()
            h = _read_matrix(code_dir / "H.txt")
            t_path = code_dir / "T.txt"
            t = _read_matrix(t_path) if t_path.exists() else None
        elif "h" in raw:
            h = _read_matrix((base / raw["h"]).resolve())
            t = _read_matrix((base / raw["t"]).resolve()) if "t" in raw \
                else None
        else:
            return _fail("config needs either dir= or h=")
        code = LinearCode.from_pcm(h)
        kind = raw.get("decoder", "")
        if kind not in ("bp", "gaed", "rr", "osd"):
            return _fail(f"decoder must be bp, gaed, rr or osd, got {kind!r}")
        powers = tuple(int(x) for x in
                       raw.get("gaed_powers", "0,1,-1").split(","))
        spec = DecoderSpec(
            kind=kind,
            iterations=int(raw.get("iterations", "20")),
            normalization=float(raw.get("normalization", "0.75")),
            early_stop=_BOOL_WORDS[raw.get("early_stop", "true").lower()],
            ell=int(raw.get("ell", "3")),
            osd_order=int(raw.get("osd_order", "3")),
            powers=powers)
        aut = None
        if kind == "gaed":
            if t is None:
                return _fail("gaed decoding needs t= (or a dir with T.txt)")
            try:
                aut = GeneralizedAutomorphism.from_matrix(t)
            except SingularMatrixError:
                return _fail("T is singular; refusing to simulate")
            if not verify_automorphism(code, t):
                return _fail("T is not an automorphism of the code; "
                             "refusing to simulate")
        if "ebn0_db" not in raw:
            return _fail("config needs ebn0_db=")
        cfg = SweepConfig(
            ebn0_db=tuple(float(x) for x in raw["ebn0_db"].split(",")),
            min_frame_errors=int(raw.get("min_frame_errors", "300")),
            max_frames=int(raw.get("max_frames", "1000000")),
            seed=int(raw.get("seed", "0")),
            workers=int(raw.get("workers", "1")),
            random_codewords=_BOOL_WORDS[
                raw.get("random_codewords", "false").lower()])
    except (OSError, ValueError, KeyError) as e:
        return _fail(str(e))
    records = run_sweep(code, spec, cfg, aut=aut)
    text = format_records(records)
    if "out" in raw:
        (base / raw["out"]).resolve().write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    d = Path(args.code_dir)
    try:
        manifest = read_kv(d / "manifest.txt")
        h = read_dense(d / "H.txt")
        h_alist = read_alist(d / "H.alist")
        t = read_dense(d / "T.txt")
        t_inv = read_dense(d / "T_inv.txt")
        t_sq = read_dense(d / "T_sq.txt")
        a = read_dense(d / "A.txt")
        code = LinearCode.from_pcm(h)
    except (OSError, ValueError, KeyError) as e:
        return _fail(str(e))
    r = code.n - code.k
    eye = BitMatrix.identity(code.n)
    normal = code.h @ a
    checks = [
        ("pcm_formats_agree", h == h_alist),
        ("automorphism_t", verify_automorphism(code, t)),
        ("automorphism_t_inv", verify_automorphism(code, t_inv)),
        ("automorphism_t_sq", verify_automorphism(code, t_sq)),
        ("t_inv_matches", t @ t_inv == eye),
        ("t_sq_matches", t_sq == t @ t),
        ("basis_normalizes_pcm",
         list(normal) == [1 << i for i in range(r)]),
        ("basis_inverse_top_is_pcm",
         rank(a) == code.n and list(invert(a))[:r] == list(code.h)),
        ("omega_t", t.weight == int(manifest.get("omega_t", "-1"))),
        ("omega_t_inv",
         t_inv.weight == int(manifest.get("omega_t_inv", "-1"))),
        ("omega_t_sq", t_sq.weight == int(manifest.get("omega_t_sq", "-1"))),
        ("delta_t",
         t.weight - code.n == int(manifest.get("delta_t", "-1"))),
    ]
    ok = True
    for name, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'} {name}")
        ok &= passed
    return 0 if ok else _VALIDATION


def _cmd_dmin(args) -> int:
    path = Path(args.matrix)
    try:
        m = _read_matrix(path, args.format)
    except (OSError, ValueError) as e:
        return _fail(str(e))
    # drop dependent rows so redundant PCMs are accepted
    pivots: dict[int, int] = {}
    kept = []
    for row in m:
        v = row
        while v:
            lead = v.bit_length() - 1
            if lead in pivots:
                v ^= pivots[lead]
            else:
                pivots[lead] = v
                kept.append(row)
                break
    if not kept or len(kept) >= m.cols:
        return _fail("matrix does not define a code with 0 < k < n")
    try:
        d = min_distance(LinearCode.from_pcm(BitMatrix(kept, m.cols)))
    except ValueError as e:
        return _fail(str(e))
    print(d)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "construct":
        return _cmd_construct(args, parser)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "verify":
        return _cmd_verify(args)
    return _cmd_dmin(args)


if __name__ == "__main__":
    sys.exit(main())
