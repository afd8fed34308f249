"""ekscan: Euler-Kronecker constants for prime cyclotomic fields.

Certified series evaluation of the Ramanujan-Deninger gamma function's
logarithm and companions, an arbitrary-length FFT engine for character
sums, and a resumable scanner with accuracy auditing over prime moduli.
"""
from .coeffs import CoefficientTable, Precision, bernoulli, build_table, get_table
from .specfun import (
    DomainPoint,
    EvalResult,
    eval_digamma,
    eval_log_gamma,
    eval_psi1,
    eval_r,
    eval_s,
    eval_t,
    s_reflect_sum,
    truncation_index_s,
    truncation_index_t,
)
from .lfunc import (
    CharacterSpectrum,
    EKRecord,
    PrimeContext,
    SequenceBundle,
    build_sequences,
    ek_aggregate,
    ek_for_prime,
    lderiv_spectrum_S,
    lderiv_spectrum_T,
    prime_context,
)
from .transform import TransformPlan, execute, plan, twiddled_half_transform
from .accuracy import AccuracyReport, audit_prime, delta, norm_closed_forms, roundtrip_audit
from .offsets import OffsetSequence, VScore, greedy_offsets, m_of, v_score
from .scanstore import ResultStore, ScanManifest, export_plotdata, scan, verify_bounds

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport", "CharacterSpectrum", "CoefficientTable", "DomainPoint",
    "EKRecord", "EvalResult", "OffsetSequence", "Precision", "PrimeContext",
    "ResultStore", "ScanManifest", "SequenceBundle", "TransformPlan", "VScore",
    "audit_prime", "bernoulli", "build_sequences", "build_table", "delta",
    "ek_aggregate", "ek_for_prime", "eval_digamma", "eval_log_gamma",
    "eval_psi1", "eval_r", "eval_s", "eval_t", "execute", "export_plotdata",
    "get_table", "greedy_offsets", "lderiv_spectrum_S", "lderiv_spectrum_T",
    "m_of", "norm_closed_forms", "plan", "prime_context", "roundtrip_audit",
    "s_reflect_sum", "scan", "truncation_index_s", "truncation_index_t",
    "twiddled_half_transform", "v_score", "verify_bounds",
]
