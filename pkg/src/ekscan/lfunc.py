"""L'/L(1, chi) for all non-principal characters mod an odd prime q.

Characters are parameterised by a fixed primitive root g: with a_k = g^k
mod q, the character of index j is chi_j(a_k) = e^(2 pi i jk/(q-1)), so a
sum over a of chi_j-bar(a) f(a/q) is a length-(q-1) DFT of f(a_k/q) in k.
Since a_{k+N} = q - a_k for N = (q-1)/2, splitting k into halves decimates
the DFT in frequency: even j see the symmetric part f(a/q) + f(1-a/q) and
odd j the antisymmetric part, each a length-N transform.

Two independent evaluation routes are implemented:

  S-route (decimated): even characters combine the symmetric sums of
    S(a/q) and log Gamma(a/q) (gamma + log 2pi - (1/2) sum S / sum logG);
    odd characters combine the antisymmetric log Gamma sum with the first
    chi-Bernoulli number B_1 = (sum_a a chi(a))/q, which up to the factor
    1/2 is the transform of x_k = 2 a_k/q - 1.  Three length-N transforms
    serve everything: the z/x pair shares one complex transform.

  T-route (full length): for every chi != chi_0,
    L'/L(1,chi) = -log q - [sum chi(a) T(a/q)] / [sum chi(a) psi(a/q)],
    with no decimation; it exists to double-check the S-route.

Sequence values are generated either with the certified evaluators
(mode='mp', rounded to float64 afterwards) or with vectorised float64
kernels fed by the same coefficient table (mode='fast'); transforms run at
machine precision under the accuracy module's error model.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import digamma as _psi_f64
from scipy.special import gammaln as _gammaln_f64

import mpmath as mp

from .coeffs import CoefficientTable, get_table
from .errors import AuditFailure, DomainError, SingularityError
from .primes import is_prime, power_sequence, smallest_primitive_root
from .specfun import (
    eval_digamma,
    eval_log_gamma,
    eval_t,
    s_reflect_sum,
    truncation_index_s,
    truncation_index_t,
)
from . import transform as tr

IMAG_CANCEL_TOL = 1e-10
MP_MODE_AUTO_LIMIT = 4096
FAST_SEQUENCE_BITS = 50  # float64 truncation target for the bulk kernels


@dataclass(frozen=True)
class PrimeContext:
    """Primitive-root parametrisation of the residues mod q."""

    q: int
    g: int
    n_half: int
    index_seq: np.ndarray  # a_k = g^k mod q, k = 0..q-2

    def __post_init__(self):
        if self.index_seq[0] != 1:
            raise DomainError("index sequence must start at a_0 = 1")


@dataclass
class SequenceBundle:
    """The four length-N input sequences of the decimated S-route."""

    xk: np.ndarray      # 2 a_k/q - 1
    y_sym: np.ndarray   # logG(a_k/q) + logG(1 - a_k/q) - log pi
    z_anti: np.ndarray  # logG(a_k/q) - logG(1 - a_k/q)
    s_sym: np.ndarray   # S(a_k/q) + S(1 - a_k/q)
    mode: str = "fast"


@dataclass
class CharacterSpectrum:
    """values[j] = L'/L(1, chi_j) for j = 1..q-2; slot 0 is unused.

    parity of chi_j is the parity of j (chi_j(-1) = (-1)^j); conjugate
    characters pair up as j <-> q-1-j.  principal_checks carries the j=0
    transform slots (plain sums of the input sequences) for diagnostics.
    """

    q: int
    values: np.ndarray
    route: str
    principal_checks: dict = field(default_factory=dict)

    def nonprincipal(self) -> np.ndarray:
        return self.values[1:]


@dataclass
class EKRecord:
    """Per-prime aggregate of the spectrum."""

    q: int
    gq: float
    gq_plus: float
    m_odd: float
    m_even: float
    mq: float
    argmax_j: int
    vq: float = float("nan")
    err_estimate: float = float("nan")


def prime_context(q: int) -> PrimeContext:
    """Smallest-primitive-root context for an odd prime q."""
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise DomainError(f"{q} is not an odd prime")
    g = smallest_primitive_root(q)
    seq = power_sequence(g, q)
    return PrimeContext(q, g, (q - 1) // 2, seq)


# ---- vectorised float64 sequence kernels --------------------------------------


def s_reflect_f64(a: np.ndarray, q: int, table: CoefficientTable) -> np.ndarray:
    """S(a/q) + S(1-a/q) in float64 for integer arrays 1 <= a <= q-1.

    Only even-index coefficients enter; the evaluation point is folded to
    t = min(a, q-a)/q < 1/2 so the power series always converges at the
    worst-case rate of the midpoint.
    """
    t = np.minimum(a, q - a) / q
    worst = Fraction(q - 1, 2 * q) if q > 3 else Fraction(1, 3)
    lmax = max(truncation_index_s(1 + worst, FAST_SEQUENCE_BITS) // 2 + 1, 1)
    if 2 * lmax > table.max_index:
        raise DomainError("coefficient table too short for the fast kernel")
    coef = table.reflect_even_f64  # 2 L(2l)/l
    u = t * t
    acc = np.zeros_like(t)
    pw = np.ones_like(t)
    for ell in range(1, lmax + 1):
        pw = pw * u
        acc += coef[ell] * pw
    return np.log(t) ** 2 + acc


def t_values_f64(a: np.ndarray, q: int, table: CoefficientTable) -> np.ndarray:
    """T(a/q) in float64 for integer arrays 1 <= a <= q-1.

    Shifted route below 1/2, direct Taylor route above; both collapse to
    powers of u = -a/q resp. 1 - a/q with the same coefficients L(k).
    """
    x = a / q
    small = 2 * a < q
    u = np.where(small, -x, 1.0 - x)
    base = np.where(small, -np.log(x) / x, 0.0)
    worst = Fraction(q - 1, 2 * q) if q > 3 else Fraction(1, 3)
    kmax = truncation_index_t(1 + worst, FAST_SEQUENCE_BITS)
    if kmax > table.max_index:
        raise DomainError("coefficient table too short for the fast kernel")
    coef = table.L_f64
    acc = np.zeros_like(x)
    pw = np.ones_like(x)
    for k in range(2, kmax + 1):
        pw = pw * u
        acc += coef[k] * pw  # u^{k-1}
    return base + acc


def build_sequences(
    ctx: PrimeContext,
    bits: int = 128,
    mode: str = "auto",
    table: CoefficientTable | None = None,
) -> SequenceBundle:
    """The four length-N sequences feeding the decimated S-route.

    mode='mp' routes every value through the certified evaluators at
    `bits` and rounds to float64 (exact to the float64 ulp); mode='fast'
    uses the vectorised kernels directly in float64.  'auto' picks 'mp'
    for small q where the cost is negligible.
    """
    if table is None:
        table = get_table(bits)
    if mode == "auto":
        mode = "mp" if ctx.q <= MP_MODE_AUTO_LIMIT else "fast"
    q, n = ctx.q, ctx.n_half
    ah = ctx.index_seq[:n]
    xk = 2 * ah / q - 1.0
    if mode == "fast":
        lg = _gammaln_f64(np.arange(1, q) / q)
        ga, gb = lg[ah - 1], lg[q - ah - 1]
        y_sym = ga + gb - np.log(np.pi)
        z_anti = ga - gb
        s_sym = s_reflect_f64(ah, q, table)
    elif mode == "mp":
        lgamma = np.empty(q - 1)
        for a in range(1, q):
            lgamma[a - 1] = float(eval_log_gamma(Fraction(a, q), bits, table).value)
        ga, gb = lgamma[ah - 1], lgamma[q - ah - 1]
        y_sym = ga + gb - np.log(np.pi)
        z_anti = ga - gb
        s_sym = np.empty(n)
        for i, a in enumerate(ah):
            s_sym[i] = float(s_reflect_sum(Fraction(int(a), q), bits, table).value)
    else:
        raise DomainError(f"unknown sequence mode {mode!r}")
    if not (np.all(np.isfinite(y_sym)) and np.all(np.isfinite(s_sym))):
        raise AuditFailure("non-finite sequence entry")
    if not np.all(s_sym > 0):
        raise AuditFailure("symmetric S sequence must be strictly positive")
    return SequenceBundle(xk, y_sym, z_anti, s_sym, mode)


# ---- spectra -------------------------------------------------------------------


def lderiv_spectrum_S(
    ctx: PrimeContext, bundle: SequenceBundle, backend: str | None = None
) -> CharacterSpectrum:
    """Decimation-in-frequency route over three length-N transforms."""
    q, n = ctx.q, ctx.n_half
    gamma = float(mp.euler)
    log2pi = float(mp.log(2 * mp.pi))
    fwd = tr.plan(n, "forward", backend=backend)
    f_s = tr.execute(fwd, bundle.s_sym)
    f_y = tr.execute(fwd, bundle.y_sym)
    # sum_a chibar_j(a) f(a) for odd j = 2m+1 is the negative-exponent
    # twiddled half-transform; realised as conj(positive-exponent of conj):
    w_neg = np.conj(tr.twiddled_half_transform(bundle.z_anti - 1j * bundle.xk, q, backend))
    y_z = (w_neg + np.conj(w_neg[::-1])) / 2  # transform of z_anti
    y_x = (w_neg - np.conj(w_neg[::-1])) / 2j  # transform of xk = 2 B_1(chibar)
    values = np.zeros(q - 1, dtype=np.complex128)
    if n > 1:
        denom = f_y[1:n]
        bad = np.nonzero(denom == 0)[0]
        if bad.size:
            raise SingularityError("even-character log-gamma sum vanished", int(2 * (bad[0] + 1)))
        values[2 * np.arange(1, n)] = gamma + log2pi - 0.5 * f_s[1:n] / denom
    bad = np.nonzero(y_x == 0)[0]
    if bad.size:
        raise SingularityError("first chi-Bernoulli number vanished", int(2 * bad[0] + 1))
    values[2 * np.arange(n) + 1] = gamma + log2pi + y_z / y_x
    checks = {"s_sum": float(f_s[0].real), "y_sum": float(f_y[0].real)}
    return CharacterSpectrum(q, values, "S", checks)


def lderiv_spectrum_T(
    ctx: PrimeContext,
    bits: int = 128,
    mode: str = "auto",
    table: CoefficientTable | None = None,
    backend: str | None = None,
) -> CharacterSpectrum:
    """Full-length cross-check route through T and digamma."""
    if table is None:
        table = get_table(bits)
    if mode == "auto":
        mode = "mp" if ctx.q <= MP_MODE_AUTO_LIMIT else "fast"
    q = ctx.q
    if mode == "fast":
        t_by_a = t_values_f64(np.arange(1, q), q, table)
        psi_by_a = _psi_f64(np.arange(1, q) / q)
    elif mode == "mp":
        t_by_a = np.empty(q - 1)
        psi_by_a = np.empty(q - 1)
        for a in range(1, q):
            t_by_a[a - 1] = float(eval_t(Fraction(a, q), bits, table).value)
            psi_by_a[a - 1] = float(eval_digamma(Fraction(a, q), bits, table).value)
    else:
        raise DomainError(f"unknown sequence mode {mode!r}")
    t_seq = t_by_a[ctx.index_seq - 1]
    psi_seq = psi_by_a[ctx.index_seq - 1]
    fwd = tr.plan(q - 1, "forward", backend=backend)
    f_t = tr.execute(fwd, t_seq)
    f_p = tr.execute(fwd, psi_seq)
    values = np.zeros(q - 1, dtype=np.complex128)
    denom = f_p[1:]
    bad = np.nonzero(denom == 0)[0]
    if bad.size:
        raise SingularityError("digamma character sum vanished", int(bad[0] + 1))
    # sum chi_j f = conj(sum chibar_j f) for real sequences
    values[1:] = -np.log(q) - np.conj(f_t[1:] / denom)
    checks = {"t_sum": float(f_t[0].real), "psi_sum": float(f_p[0].real)}
    return CharacterSpectrum(q, values, "T", checks)


def ek_aggregate(spectrum: CharacterSpectrum, ctx: PrimeContext) -> EKRecord:
    """Euler-Kronecker constants and the extremal statistic from a spectrum.

    The imaginary parts cancel in conjugate pairs; their accumulated
    magnitude is asserted rather than silently dropped.  The tolerance is
    1e-10 with a rounding allowance of 16 ulps per unit of summed
    magnitude, which only matters beyond multi-million moduli where the
    float64 residue of an exactly-cancelling sum outgrows the flat bound.
    """
    q = ctx.q
    vals = spectrum.values
    nz = vals[1:]
    total = complex(np.sum(nz))
    gamma = float(mp.euler)
    imag_tol = max(IMAG_CANCEL_TOL, 16 * 2.0**-53 * float(np.sum(np.abs(nz))))
    if abs(total.imag) >= imag_tol:
        raise AuditFailure(
            f"q={q}: imaginary parts failed to cancel ({total.imag:.3e})"
        )
    gq = gamma + total.real
    even_idx = np.arange(2, q - 1, 2)
    even_total = complex(np.sum(vals[even_idx])) if even_idx.size else 0.0
    if even_idx.size and abs(even_total.imag) >= imag_tol:
        raise AuditFailure(f"q={q}: even-character imaginary parts failed to cancel")
    gq_plus = gamma + (even_total.real if even_idx.size else 0.0)
    mags = np.abs(nz)
    odd_idx = np.arange(1, q - 1, 2)
    m_odd = float(np.max(mags[odd_idx - 1]))
    m_even = float(np.max(mags[even_idx - 1])) if even_idx.size else 0.0
    argmax_j = int(np.argmax(mags)) + 1
    return EKRecord(
        q=q,
        gq=float(gq),
        gq_plus=float(gq_plus),
        m_odd=m_odd,
        m_even=m_even,
        mq=max(m_odd, m_even),
        argmax_j=argmax_j,
    )


def ek_for_prime(
    q: int,
    bits: int = 128,
    mode: str = "auto",
    table: CoefficientTable | None = None,
    backend: str | None = None,
) -> tuple[EKRecord, PrimeContext, SequenceBundle, CharacterSpectrum]:
    """Convenience: full S-route pipeline for one prime."""
    ctx = prime_context(q)
    if table is None:
        table = get_table(bits)
    bundle = build_sequences(ctx, bits, mode, table)
    spec = lderiv_spectrum_S(ctx, bundle, backend)
    return ek_aggregate(spec, ctx), ctx, bundle, spec
