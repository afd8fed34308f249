"""FFT error model, closed-form sequence norms, and round-trip audits.

The root-mean-square relative error of a length-N transform at machine
epsilon eps is modelled as

    Delta(N, eps) = 0.6 eps sqrt(log2 N),

and a forward/inverse round trip of a sequence w obeys

    ||F^-1(F(w)) - w||_2   <  Delta (2 + Delta) ||w||_2
    ||F^-1(F(w)) - w||_inf <  Delta (2 + Delta) sqrt(N) ||w||_inf.

Audits measure the round trip live and fail loudly when a bound is
exceeded; the scan pipeline attaches them on a sampling schedule.

The 0.6 eps sqrt(log2 N) model is calibrated for single-pass transforms.
Arbitrary lengths are served through the chirp algorithm (three padded
power-of-two passes plus pointwise chirp multiplies), whose measured
round-trip error runs a small constant above the single-pass model (up to
~4.5x for the built-in engine, ~2.3x for pocketfft, on worst-case
lengths).  Audit bounds therefore use an effective machine epsilon of
AUDIT_EPS_FACTOR ulps, overridable via EKSCAN_AUDIT_EPS; the delta()
operation itself stays the pure model so what-if reports (e.g. eps=2^-64)
remain faithful.

The closed forms for the pipeline sequence norms make the model evaluable
without building any sequence:

    ||x||_2   = sqrt((q-1)(q-2)/(6q))
    ||y||_inf = -log sin(pi/q)
    ||z||_inf = 2 log Gamma(1/q) - log(pi / sin(pi/q))
    ||w||_inf = S(1/q) + S(1 - 1/q)
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
import numpy as np

from .coeffs import CoefficientTable, get_table
from .errors import AuditFailure, DomainError
from .specfun import eval_log_gamma, s_reflect_sum
from . import transform as tr

DEFAULT_EPS = 2.0**-53  # complex128 transforms
AUDIT_EPS_FACTOR = 8.0  # chirp-path adjustment for double-precision audits


def audit_eps() -> float:
    """Effective machine epsilon for audit bounds (see module docstring)."""
    env = os.environ.get("EKSCAN_AUDIT_EPS")
    if env:
        return float(env)
    return AUDIT_EPS_FACTOR * DEFAULT_EPS


def delta(n: int, eps: float | None = None) -> float:
    """Delta(N, eps) = 0.6 eps sqrt(log2 N); monotone increasing in N."""
    if n < 2:
        raise DomainError(f"error model needs N >= 2, got {n}")
    if eps is None:
        eps = DEFAULT_EPS
    if eps <= 0:
        raise DomainError(f"machine epsilon must be positive, got {eps}")
    return 0.6 * eps * float(np.sqrt(np.log2(n)))


def norm_closed_forms(
    q: int, bits: int = 128, table: CoefficientTable | None = None
) -> dict[str, mp.mpf]:
    """Closed-form norms of the four pipeline sequences for modulus q."""
    if q < 3 or q % 2 == 0:
        raise DomainError(f"need an odd prime modulus, got {q}")
    if table is None:
        table = get_table(bits)
    with mp.workprec(bits + 32):
        x2 = mp.sqrt(mp.mpf((q - 1)) * (q - 2) / (6 * q))
        sin_piq = mp.sin(mp.pi / q)
        y_inf = -mp.log(sin_piq)
        lg = eval_log_gamma(Fraction(1, q), bits, table).value
        z_inf = 2 * lg - mp.log(mp.pi / sin_piq)
        w_inf = s_reflect_sum(Fraction(1, q), bits, table).value
        return {"x_l2": +x2, "y_linf": +y_inf, "z_linf": +z_inf, "w_linf": +w_inf}


@dataclass
class AccuracyReport:
    """Measured round-trip errors against their predicted bounds."""

    n: int
    eps: float
    delta: float
    norms: dict[str, tuple[float, float]] = field(default_factory=dict)  # (l2, linf)
    round_trip: dict[str, tuple[float, float, float]] = field(default_factory=dict)
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)

    def assert_within_bounds(self) -> None:
        for name, (e2, einf, _rel) in self.round_trip.items():
            b2, binf = self.bounds[name]
            if e2 > b2 or einf > binf:
                raise AuditFailure(
                    f"round-trip error for {name!r} exceeds model bound: "
                    f"E2={e2:.3e} (bound {b2:.3e}), Einf={einf:.3e} (bound {binf:.3e})"
                )


def roundtrip_audit(
    seq: np.ndarray,
    backend: str | None = None,
    eps: float | None = None,
    name: str = "seq",
    report: AccuracyReport | None = None,
) -> tuple[float, float]:
    """Measure ||F^-1(F(seq)) - seq|| in the 2- and sup-norms.

    The measured errors are compared against the model bounds; exceeding
    either raises AuditFailure.  Returns (E2, Einf) and, when a report is
    supplied, records norms, errors and bounds into it.
    """
    x = np.asarray(seq, dtype=np.complex128)
    n = x.shape[0]
    if not np.all(np.isfinite(x)):
        raise DomainError("audit input must be finite")
    fwd = tr.plan(n, "forward", backend=backend)
    inv = tr.plan(n, "inverse", backend=backend)
    back = tr.execute(inv, tr.execute(fwd, x))
    diff = back - x
    e2 = float(np.linalg.norm(diff))
    einf = float(np.max(np.abs(diff))) if n else 0.0
    l2 = float(np.linalg.norm(x))
    linf = float(np.max(np.abs(x))) if n else 0.0
    eps_used = eps if eps is not None else audit_eps()
    if n >= 2:
        d = delta(n, eps_used)
        b2 = d * (2 + d) * l2
        binf = d * (2 + d) * float(np.sqrt(n)) * linf
    else:
        d, b2, binf = 0.0, 0.0, 0.0
    rep = report if report is not None else AccuracyReport(n, eps_used, d)
    rep.norms[name] = (l2, linf)
    rep.round_trip[name] = (e2, einf, e2 / l2 if l2 else 0.0)
    rep.bounds[name] = (b2, binf)
    rep.assert_within_bounds()
    return e2, einf


def audit_prime(
    q: int,
    bits: int = 128,
    mode: str = "auto",
    backend: str | None = None,
    eps: float | None = None,
) -> AccuracyReport:
    """Full per-prime audit: build the sequence bundle, round-trip every
    sequence, and compare the measured norms with the closed forms."""
    from .lfunc import build_sequences, prime_context  # local: avoid cycle

    ctx = prime_context(q)
    table = get_table(bits)
    bundle = build_sequences(ctx, bits, mode, table)
    n = ctx.n_half
    eps_used = eps if eps is not None else audit_eps()
    rep = AccuracyReport(n, eps_used, delta(n, eps_used) if n >= 2 else 0.0)
    for name, seq in (
        ("x", bundle.xk),
        ("y", bundle.y_sym),
        ("z", bundle.z_anti),
        ("w", bundle.s_sym),
    ):
        roundtrip_audit(seq, backend=backend, eps=eps, name=name, report=rep)
    return rep
