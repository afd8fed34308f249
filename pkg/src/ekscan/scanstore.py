"""Resumable prime-range scans with a binary result store and CSV exports.

A scan walks every odd prime in [q_min, q_max], runs the decimated
character-sum pipeline, attaches v(q) and a sampled round-trip audit, and
appends one fixed-width binary record per prime.  The store directory
holds

    records.bin   header + 72-byte records (q, G_q, G_q^+, M parts,
                  argmax index, v(q), error estimate)
    manifest.json scan parameters, watermark, audit counters
    records.csv   human-readable mirror, regenerated on completion

Scans are resumable: records already on disk are never recomputed, and the
watermark (largest q with every smaller in-range prime finished) advances
monotonically.  Records are deterministic for fixed (bits, mode, backend):
summation trees and the primitive-root choice are fixed, so re-running a
range must reproduce byte-identical records.
"""
from __future__ import annotations

import json
import math
import multiprocessing as mp_proc
import struct
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import accuracy, lfunc, offsets
from .coeffs import get_table
from .errors import AuditFailure, DomainError, StoreError
from .primes import primes_in_range

MAGIC = b"EKSC"
STORE_VERSION = 1
_HEADER = struct.Struct("<4sHHQQII")  # magic, version, bits, qmin, qmax, recsize, flags
_RECORD = struct.Struct("<Q5dQ2d")
CSV_COLUMNS = "q,gq,gq_plus,m_odd,m_even,mq,argmax_j,vq,err_estimate"
DEFAULT_AUDIT_EVERY = 64


@dataclass
class ScanManifest:
    q_min: int
    q_max: int
    bits: int
    mode: str
    backend: str
    route: str = "S"
    watermark: int = 0
    count: int = 0
    audits_run: int = 0
    audits_failed: int = 0
    audit_every: int = DEFAULT_AUDIT_EVERY

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


class ResultStore:
    """Append-only record file keyed by prime, one record per prime."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.records_path = self.path / "records.bin"
        self.manifest_path = self.path / "manifest.json"
        self.csv_path = self.path / "records.csv"

    def exists(self) -> bool:
        return self.records_path.exists()

    def init(self, manifest: ScanManifest) -> None:
        self.path.mkdir(parents=True, exist_ok=True)
        with open(self.records_path, "wb") as fh:
            fh.write(
                _HEADER.pack(
                    MAGIC, STORE_VERSION, manifest.bits,
                    manifest.q_min, manifest.q_max, _RECORD.size, 0,
                )
            )
        self.write_manifest(manifest)

    def write_manifest(self, manifest: ScanManifest) -> None:
        self.manifest_path.write_text(manifest.to_json() + "\n")

    def read_manifest(self) -> ScanManifest:
        if not self.manifest_path.exists():
            raise StoreError(f"{self.manifest_path} missing")
        return ScanManifest(**json.loads(self.manifest_path.read_text()))

    def read_header(self) -> tuple[int, int, int, int]:
        with open(self.records_path, "rb") as fh:
            raw = fh.read(_HEADER.size)
        magic, version, bits, qmin, qmax, recsize, _ = _HEADER.unpack(raw)
        if magic != MAGIC or version != STORE_VERSION or recsize != _RECORD.size:
            raise StoreError(f"{self.records_path}: incompatible store format")
        return bits, qmin, qmax, recsize

    def append(self, rec: lfunc.EKRecord) -> None:
        with open(self.records_path, "ab") as fh:
            fh.write(self._pack(rec))
            fh.flush()

    @staticmethod
    def _pack(rec: lfunc.EKRecord) -> bytes:
        return _RECORD.pack(
            rec.q, rec.gq, rec.gq_plus, rec.m_odd, rec.m_even, rec.mq,
            rec.argmax_j, rec.vq, rec.err_estimate,
        )

    def records(self) -> list[lfunc.EKRecord]:
        if not self.exists():
            return []
        self.read_header()
        out = []
        with open(self.records_path, "rb") as fh:
            fh.seek(_HEADER.size)
            while True:
                raw = fh.read(_RECORD.size)
                if len(raw) < _RECORD.size:
                    break
                q, gq, gqp, mo, me, mq, amj, vq, err = _RECORD.unpack(raw)
                out.append(lfunc.EKRecord(q, gq, gqp, mo, me, mq, amj, vq, err))
        return out

    def done_set(self) -> set[int]:
        return {r.q for r in self.records()}

    def compact(self) -> None:
        """Rewrite records sorted by q (idempotent; drops duplicates)."""
        recs = {r.q: r for r in self.records()}
        bits, qmin, qmax, _ = self.read_header()
        with open(self.records_path, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, STORE_VERSION, bits, qmin, qmax, _RECORD.size, 0))
            for q in sorted(recs):
                fh.write(self._pack(recs[q]))

    def write_csv(self) -> None:
        recs = sorted(self.records(), key=lambda r: r.q)
        lines = [CSV_COLUMNS]
        for r in recs:
            lines.append(
                f"{r.q},{r.gq!r},{r.gq_plus!r},{r.m_odd!r},{r.m_even!r},"
                f"{r.mq!r},{r.argmax_j},{r.vq!r},{r.err_estimate!r}"
            )
        self.csv_path.write_text("\n".join(lines) + "\n")


# ---- per-prime work ------------------------------------------------------------

_WORK: dict = {}


def _init_worker(bits: int, mode: str, backend: str | None, audit_set: frozenset[int]) -> None:
    _WORK["bits"] = bits
    _WORK["mode"] = mode
    _WORK["backend"] = backend
    _WORK["audit_set"] = audit_set
    _WORK["table"] = get_table(bits)
    _WORK["offsets"] = offsets.default_offsets()


def _scan_one(q: int) -> tuple[bytes, bool, bool]:
    """Compute one record; returns (packed bytes, audited, audit_ok)."""
    bits, mode, backend = _WORK["bits"], _WORK["mode"], _WORK["backend"]
    table = _WORK["table"]
    rec, ctx, bundle, _spec = lfunc.ek_for_prime(q, bits, mode, table, backend)
    rec.vq = offsets.v_score(q, _WORK["offsets"]).v
    n = ctx.n_half
    if n >= 2:
        d = accuracy.delta(n)
        rec.err_estimate = d * (2 + d) * float(np.linalg.norm(bundle.s_sym))
    else:
        rec.err_estimate = 0.0
    audited = q in _WORK["audit_set"]
    audit_ok = True
    if audited and n >= 2:
        try:
            eps = accuracy.audit_eps()
            rep = accuracy.AccuracyReport(n, eps, accuracy.delta(n, eps))
            for name, seq in (("w", bundle.s_sym), ("y", bundle.y_sym), ("x", bundle.xk)):
                accuracy.roundtrip_audit(seq, backend=backend, name=name, report=rep)
        except AuditFailure:
            audit_ok = False
    return ResultStore._pack(rec), audited, audit_ok


def scan(
    q_min: int,
    q_max: int,
    bits: int = 128,
    workers: int = 1,
    store_path: str | Path = "ekscan-store",
    mode: str = "fast",
    backend: str | None = "pocketfft",
    audit_every: int = DEFAULT_AUDIT_EVERY,
    progress: bool = False,
) -> ScanManifest:
    """EKRecord for every odd prime in [q_min, q_max], resumably.

    Work is distributed largest-first over `workers` processes (per-prime
    cost grows with q, so the tail stays smooth); a single writer appends
    completed records.  Every `audit_every`-th prime (in ascending order)
    gets a round-trip audit; a failed audit halts the scan.
    """
    if q_min < 3:
        q_min = 3
    if q_min > q_max:
        raise DomainError(f"empty range [{q_min}, {q_max}]")
    store = ResultStore(store_path)
    qs = [int(q) for q in primes_in_range(q_min, q_max)]
    audit_set = frozenset(q for i, q in enumerate(qs) if i % max(audit_every, 1) == 0)
    if store.exists():
        bits_h, qmin_h, qmax_h, _ = store.read_header()
        manifest = store.read_manifest()
        if bits_h != bits or qmin_h != q_min or qmax_h != q_max:
            raise StoreError(
                f"store {store.path} was created for bits={bits_h}, "
                f"range [{qmin_h}, {qmax_h}]; refusing to mix parameters"
            )
        if manifest.mode != mode or manifest.backend != (backend or "builtin"):
            raise StoreError(
                f"store {store.path} was scanned with mode={manifest.mode}, "
                f"backend={manifest.backend}; mixing would break record determinism"
            )
        done = store.done_set()
    else:
        manifest = ScanManifest(
            q_min, q_max, bits,
            mode=mode, backend=backend or "builtin", audit_every=audit_every,
        )
        store.init(manifest)
        done = set()
    todo = sorted((q for q in qs if q not in done), reverse=True)
    get_table(bits)  # build (or load) once before forking
    offsets.default_offsets()
    completed = len(done)
    if todo:
        init_args = (bits, mode, backend, audit_set)
        if workers <= 1:
            _init_worker(*init_args)
            results = map(_scan_one, todo)
            _drain(results, store, manifest, todo, done, qs, progress)
        else:
            with mp_proc.Pool(workers, initializer=_init_worker, initargs=init_args) as pool:
                results = pool.imap_unordered(_scan_one, todo, chunksize=4)
                _drain(results, store, manifest, todo, done, qs, progress)
        completed = len(done)
    manifest.count = completed
    manifest.watermark = _watermark(done, qs)
    store.write_manifest(manifest)
    store.compact()
    store.write_csv()
    return manifest


def _drain(results, store, manifest, todo, done, qs, progress) -> None:
    for raw, audited, audit_ok in results:
        q = _RECORD.unpack(raw)[0]
        with open(store.records_path, "ab") as fh:
            fh.write(raw)
        done.add(q)
        if audited:
            manifest.audits_run += 1
            if not audit_ok:
                manifest.audits_failed += 1
                manifest.watermark = _watermark(done, qs)
                store.write_manifest(manifest)
                raise AuditFailure(f"round-trip audit failed at q={q}; scan halted")
        if progress and len(done) % 256 == 0:
            print(f"  scanned {len(done)}/{len(qs)} (q={q})", flush=True)
        if len(done) % 512 == 0:
            manifest.count = len(done)
            manifest.watermark = _watermark(done, qs)
            store.write_manifest(manifest)


def _watermark(done: set[int], qs: list[int]) -> int:
    w = 0
    for q in qs:
        if q not in done:
            break
        w = q
    return w


# ---- verification and export ----------------------------------------------------


def verify_bounds(store: ResultStore | str | Path, q_max: int | None = None) -> dict:
    """Check the scan-level claims over the stored records.

    Positivity of G_q and G_q^+ for every stored prime; the two-sided band
    17/20 loglog q < M_q < 5/4 loglog q for q > 1531 and the lower bound
    alone for q > 13.  Returns a report with any violations and the
    extremal normalised statistics.
    """
    if not isinstance(store, ResultStore):
        store = ResultStore(store)
    recs = sorted(store.records(), key=lambda r: r.q)
    if q_max is not None:
        recs = [r for r in recs if r.q <= q_max]
    if not recs:
        raise StoreError("store holds no records")
    violations = []
    neg = [(r.q, r.gq) for r in recs if r.gq <= 0] + [
        (r.q, r.gq_plus) for r in recs if r.gq_plus <= 0
    ]
    lo, hi = 17.0 / 20.0, 5.0 / 4.0
    norm = lambda r: r.mq / math.log(math.log(r.q))
    worst_lo = min((r for r in recs if r.q > 13), key=norm, default=None)
    worst_hi = max((r for r in recs if r.q > 1531), key=norm, default=None)
    for r in recs:
        nv = norm(r)
        if r.q > 13 and nv <= lo:
            violations.append({"q": r.q, "kind": "lower", "value": nv, "margin": nv - lo})
        if r.q > 1531 and nv >= hi:
            violations.append({"q": r.q, "kind": "upper", "value": nv, "margin": hi - nv})
    return {
        "count": len(recs),
        "q_max": recs[-1].q,
        "negatives": neg,
        "violations": violations,
        "min_norm_q_gt_13": (worst_lo.q, norm(worst_lo)) if worst_lo else None,
        "max_norm_q_gt_1531": (worst_hi.q, norm(worst_hi)) if worst_hi else None,
        "ok": not neg and not violations,
    }


EXPORT_KINDS = ("ek", "ekplus", "mq", "mqnorm", "hist")


def export_plotdata(store: ResultStore | str | Path, kind: str) -> str:
    """Figure-ready CSV streams from a store.

    ek/ekplus: normalised constants with the five v(q) band labels;
    mq/mqnorm: extremal statistics with the 17/20 and 5/4 guides;
    hist: 100 equal-width bins of G_q/log q with mean/sigma/mass summary.
    """
    if not isinstance(store, ResultStore):
        store = ResultStore(store)
    if kind not in EXPORT_KINDS:
        raise DomainError(f"unknown export kind {kind!r}; choose from {EXPORT_KINDS}")
    recs = sorted(store.records(), key=lambda r: r.q)
    lines: list[str] = []
    if kind == "ek":
        lines.append("q,gq_over_logq,vq,band")
        for r in recs:
            lines.append(f"{r.q},{r.gq / math.log(r.q)!r},{r.vq!r},{offsets.v_band(r.vq)}")
    elif kind == "ekplus":
        lines.append("q,gqplus_over_logq,vq,band")
        for r in recs:
            lines.append(
                f"{r.q},{r.gq_plus / math.log(r.q)!r},{r.vq!r},{offsets.v_band(r.vq)}"
            )
    elif kind == "mq":
        lines.append("q,mq,guide_lower,guide_upper")
        for r in recs:
            ll = math.log(math.log(r.q))
            lines.append(f"{r.q},{r.mq!r},{17 / 20 * ll!r},{5 / 4 * ll!r}")
    elif kind == "mqnorm":
        lines.append("q,mq_over_loglogq")
        for r in recs:
            lines.append(f"{r.q},{r.mq / math.log(math.log(r.q))!r}")
    elif kind == "hist":
        lines.append("bin_lo,bin_hi,count")
        if recs:
            vals = np.array([r.gq / math.log(r.q) for r in recs])
            counts, edges = np.histogram(vals, bins=100)
            for c, lo_e, hi_e in zip(counts, edges[:-1], edges[1:]):
                lines.append(f"{lo_e!r},{hi_e!r},{int(c)}")
            interval = float(edges[1] - edges[0])
            lines.append(f"# count={len(vals)}")
            lines.append(f"# interval={interval!r}")
            lines.append(f"# mean={float(np.mean(vals))!r}")
            lines.append(f"# sigma={float(np.std(vals))!r}")
            lines.append(f"# mass={interval * len(vals)!r}")
    return "\n".join(lines) + "\n"
