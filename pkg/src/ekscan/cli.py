"""Unified command-line entry point.

Subcommands: coeffs, eval, ek, scan, verify, export, offsets, vscore,
audit.  Plain-text output by default (every numeric line carries the bits
setting and, where meaningful, the certified error bound); --json switches
to machine-readable output.  Exit codes: 0 success, 2 usage, and the
per-category codes of the error hierarchy otherwise.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import mpmath as mp

from . import accuracy, coeffs, lfunc, offsets, scanstore, specfun
from .errors import EkscanError

DEFAULT_BITS = 128
STORE_ENV = "EKSCAN_STORE"

_EVAL_FNS = {
    "S": specfun.eval_s,
    "T": specfun.eval_t,
    "R": specfun.eval_r,
    "psi1": specfun.eval_psi1,
    "loggamma": specfun.eval_log_gamma,
    "digamma": specfun.eval_digamma,
    "sreflect": specfun.s_reflect_sum,
}


@dataclass
class Config:
    """Validated run configuration, echoed into outputs for provenance."""

    bits: int = DEFAULT_BITS
    eps: float | None = None
    cache_dir: str | None = None
    store: str = "ekscan-store"
    workers: int = 1
    audit_every: int = scanstore.DEFAULT_AUDIT_EVERY

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "Config":
        store = getattr(args, "store", None) or os.environ.get(STORE_ENV) or "ekscan-store"
        return cls(
            bits=getattr(args, "bits", DEFAULT_BITS),
            eps=getattr(args, "eps", None),
            cache_dir=os.environ.get("EKSCAN_CACHE_DIR"),
            store=store,
            workers=getattr(args, "workers", 1),
            audit_every=getattr(args, "audit_every", scanstore.DEFAULT_AUDIT_EVERY),
        )


def _digits(bits: int) -> int:
    return max(int(bits * 0.30103) + 2, 17)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ekscan",
        description="Euler-Kronecker constants, extremal L'/L(1,chi) values and "
        "the generalized-gamma special functions behind them.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="build and cache the coefficient table")
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--max-index", type=int, default=None)
    p.add_argument("--out", type=str, default=None, help="cache file path")

    p = sub.add_parser("eval", help="evaluate a special function with certified error")
    p.add_argument("--fn", choices=sorted(_EVAL_FNS), required=True)
    p.add_argument("--x", type=str, required=True, help="rational A/Q or decimal")
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("ek", help="Euler-Kronecker record for one prime")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--path", choices=("S", "T", "both"), default="S")
    p.add_argument("--mode", choices=("auto", "mp", "fast"), default="auto")
    p.add_argument("--fft", dest="backend", choices=("builtin", "pocketfft"), default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("scan", help="scan a prime range into a result store")
    p.add_argument("--from", dest="q_min", type=int, required=True)
    p.add_argument("--to", dest="q_max", type=int, required=True)
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--store", type=str, default=None)
    p.add_argument("--mode", choices=("mp", "fast"), default="fast")
    p.add_argument("--fft", dest="backend", choices=("builtin", "pocketfft"), default="pocketfft")
    p.add_argument("--audit-every", type=int, default=scanstore.DEFAULT_AUDIT_EVERY)
    p.add_argument("--progress", action="store_true")

    p = sub.add_parser("verify", help="check scan-level claims over a store")
    p.add_argument("--store", type=str, default=None)
    p.add_argument("--qmax", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("export", help="figure-ready CSV from a store")
    p.add_argument("--store", type=str, default=None)
    p.add_argument("--kind", choices=scanstore.EXPORT_KINDS, required=True)
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("offsets", help="greedy prime-offset sequence")
    p.add_argument("--count", type=int, default=offsets.DEFAULT_COUNT)
    p.add_argument("--out", type=str, default=None, help="write offsets as CSV")

    p = sub.add_parser("vscore", help="v(q) candidate score")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--count", type=int, default=offsets.DEFAULT_COUNT)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("audit", help="FFT accuracy report for one prime")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--fft", dest="backend", choices=("builtin", "pocketfft"), default=None)
    p.add_argument("--json", action="store_true")
    return ap


def _cmd_coeffs(args, cfg: Config) -> int:
    t = coeffs.build_table(args.bits, args.max_index)
    if args.out:
        coeffs.save_table(t, args.out)
        where = args.out
    else:
        path = coeffs.default_cache_dir() / f"coeffs_b{t.bits}_m{t.max_index}.txt"
        coeffs.save_table(t, path)
        where = str(path)
    d = _digits(t.bits)
    print(f"coefficient table bits={t.bits} max_index={t.max_index} -> {where}")
    print(f"gamma  = {mp.nstr(t.gamma, d)}  (bits={t.bits})")
    print(f"gamma1 = {mp.nstr(t.gamma1, d)}  (bits={t.bits})")
    print(f"zeta''(0) = {mp.nstr(t.zeta_second_zero(), d)}  (bits={t.bits})")
    return 0


def _cmd_eval(args, cfg: Config) -> int:
    fn = _EVAL_FNS[args.fn]
    res = fn(args.x, args.bits)
    if args.json:
        print(json.dumps({
            "fn": args.fn, "x": args.x, "bits": args.bits,
            "value": mp.nstr(res.value, _digits(args.bits)),
            "error_bound": float(res.error_bound),
            "terms_used": res.terms_used,
        }))
    else:
        print(
            f"{args.fn}({args.x}) = {mp.nstr(res.value, _digits(args.bits))}  "
            f"(bits={args.bits}, error_bound=2^-{args.bits}, terms={res.terms_used})"
        )
    return 0


def _cmd_ek(args, cfg: Config) -> int:
    table = coeffs.get_table(args.bits)
    ctx = lfunc.prime_context(args.q)
    discrepancy = None
    if args.path in ("S", "both"):
        bundle = lfunc.build_sequences(ctx, args.bits, args.mode, table)
        spec = lfunc.lderiv_spectrum_S(ctx, bundle, args.backend)
    if args.path in ("T", "both"):
        spec_t = lfunc.lderiv_spectrum_T(ctx, args.bits, args.mode, table, args.backend)
        if args.path == "T":
            spec = spec_t
        else:
            import numpy as np

            discrepancy = float(
                np.max(np.abs(spec.values[1:] - spec_t.values[1:]))
            )
    rec = lfunc.ek_aggregate(spec, ctx)
    rec.vq = offsets.v_score(args.q, offsets.default_offsets()).v
    n = ctx.n_half
    if n >= 2:
        import numpy as np

        d = accuracy.delta(n, cfg.eps)
        src = bundle.s_sym if args.path in ("S", "both") else None
        rec.err_estimate = (
            d * (2 + d) * float(np.linalg.norm(src)) if src is not None else d
        )
    out = {
        "q": rec.q, "bits": args.bits, "route": args.path, "mode": args.mode,
        "gq": rec.gq, "gq_plus": rec.gq_plus,
        "gq_over_logq": rec.gq / math.log(rec.q),
        "gqplus_over_logq": rec.gq_plus / math.log(rec.q),
        "m_odd": rec.m_odd, "m_even": rec.m_even, "mq": rec.mq,
        "mq_over_loglogq": rec.mq / math.log(math.log(rec.q)),
        "argmax_j": rec.argmax_j, "vq": rec.vq,
        "err_estimate": rec.err_estimate,
    }
    if discrepancy is not None:
        out["route_discrepancy"] = discrepancy
    if args.json:
        print(json.dumps(out))
    else:
        for k, v in out.items():
            print(f"{k} = {v}")
    return 0


def _cmd_scan(args, cfg: Config) -> int:
    man = scanstore.scan(
        args.q_min, args.q_max, bits=args.bits, workers=args.workers,
        store_path=cfg.store, mode=args.mode, backend=args.backend,
        audit_every=args.audit_every, progress=args.progress,
    )
    print(
        f"scanned [{man.q_min}, {man.q_max}] bits={man.bits}: {man.count} records, "
        f"watermark={man.watermark}, audits={man.audits_run} (failed {man.audits_failed})"
    )
    print(f"store: {cfg.store}")
    return 0


def _cmd_verify(args, cfg: Config) -> int:
    rep = scanstore.verify_bounds(cfg.store, args.qmax)
    if args.json:
        print(json.dumps(rep))
    else:
        print(f"records: {rep['count']} (up to q={rep['q_max']})")
        print(f"negative constants: {rep['negatives'] or 'none'}")
        print(f"band violations: {rep['violations'] or 'none'}")
        print(f"min M_q/loglog q over q>13:    {rep['min_norm_q_gt_13']}")
        print(f"max M_q/loglog q over q>1531:  {rep['max_norm_q_gt_1531']}")
        print("OK" if rep["ok"] else "FAILED")
    return 0 if rep["ok"] else 1


def _cmd_export(args, cfg: Config) -> int:
    csv = scanstore.export_plotdata(cfg.store, args.kind)
    if args.out:
        Path(args.out).write_text(csv)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(csv)
    return 0


def _cmd_offsets(args, cfg: Config) -> int:
    seq = offsets.greedy_offsets(args.count)
    m_c = offsets.m_of(seq.tail()) if seq.count > 1 else 0
    if args.out:
        lines = ["i,b"] + [f"{i+1},{b}" for i, b in enumerate(seq.b)]
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"wrote {args.out}")
    print(f"count={seq.count} b_last={seq.b[-1]} m(C)={float(m_c):.10f} (exact>{2}: {m_c > 2})")
    return 0


def _cmd_vscore(args, cfg: Config) -> int:
    seq = offsets.default_offsets() if args.count == offsets.DEFAULT_COUNT else offsets.greedy_offsets(args.count)
    vs = offsets.v_score(args.q, seq)
    if args.json:
        print(json.dumps({
            "q": vs.q, "v": vs.v, "band": offsets.v_band(vs.v),
            "contributing": list(vs.contributing), "primality": vs.primality,
        }))
    else:
        print(
            f"v({vs.q}) = {vs.v:.6f}  band={offsets.v_band(vs.v)}  "
            f"contributing={len(vs.contributing)} offsets  primality={vs.primality}"
        )
    return 0


def _cmd_audit(args, cfg: Config) -> int:
    rep = accuracy.audit_prime(args.q, args.bits, backend=args.backend, eps=args.eps)
    forms = accuracy.norm_closed_forms(args.q, args.bits)
    if args.json:
        print(json.dumps({
            "q": args.q, "n": rep.n, "eps": rep.eps, "delta": rep.delta,
            "norms": rep.norms, "round_trip": rep.round_trip, "bounds": rep.bounds,
            "closed_forms": {k: float(v) for k, v in forms.items()},
        }))
        return 0
    print(f"q={args.q} N={rep.n} eps={rep.eps:.3e} delta={rep.delta:.3e} (bits={args.bits})")
    print("closed-form norms: " + ", ".join(f"{k}={float(v):.8f}" for k, v in forms.items()))
    print("sequence  l2            linf          E2           Einf         bound2       boundinf")
    for name in rep.round_trip:
        l2, linf = rep.norms[name]
        e2, einf, _ = rep.round_trip[name]
        b2, binf = rep.bounds[name]
        print(f"{name:8s}  {l2:>12.5e}  {linf:>12.5e}  {e2:>11.3e}  {einf:>11.3e}  {b2:>11.3e}  {binf:>11.3e}")
    print("audit OK (all round trips within model bounds)")
    return 0


_COMMANDS = {
    "coeffs": _cmd_coeffs,
    "eval": _cmd_eval,
    "ek": _cmd_ek,
    "scan": _cmd_scan,
    "verify": _cmd_verify,
    "export": _cmd_export,
    "offsets": _cmd_offsets,
    "vscore": _cmd_vscore,
    "audit": _cmd_audit,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = Config.from_args(args)
    try:
        return _COMMANDS[args.command](args, cfg)
    except EkscanError as exc:
        print(f"error [{exc.category}]: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
