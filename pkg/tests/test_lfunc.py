"""Character-sum pipeline: brute-force oracles, route agreement, spot values."""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from ekscan import lfunc, specfun as sf
from ekscan.coeffs import get_table
from ekscan.errors import DomainError
from ekscan.primes import sieve_primes


def test_prime_context_examples():
    ctx = lfunc.prime_context(7)
    assert ctx.g == 3
    assert ctx.index_seq.tolist() == [1, 3, 2, 6, 4, 5]
    ctx3 = lfunc.prime_context(3)
    assert ctx3.g == 2
    assert ctx3.index_seq.tolist() == [1, 2]


def test_prime_context_negation_symmetry():
    for q in (5, 13, 101, 569):
        ctx = lfunc.prime_context(q)
        n = ctx.n_half
        assert np.all(ctx.index_seq[:n] + ctx.index_seq[n:] == q)
        assert sorted(ctx.index_seq.tolist()) == list(range(1, q))


def test_prime_context_rejects_nonprime():
    for bad in (4, 9, 15, 2):
        with pytest.raises(DomainError):
            lfunc.prime_context(bad)


def brute_spectrum(q: int, bits: int = 128):
    """O(q^2) direct evaluation over an explicit character table.

    Independent of the transform module: characters come straight from the
    discrete-log table, the sums are plain double loops in mpmath complex
    arithmetic, and the inputs are the certified evaluators.
    """
    table = get_table(bits)
    ctx = lfunc.prime_context(q)
    ind = {int(a): k for k, a in enumerate(ctx.index_seq)}
    with mp.workprec(96):
        lg = {a: sf.eval_log_gamma(Fraction(a, q), 64, table).value for a in range(1, q)}
        sv = {a: sf.eval_s(Fraction(a, q), 64, table).value for a in range(1, q)}
        tv = {a: sf.eval_t(Fraction(a, q), 64, table).value for a in range(1, q)}
        pv = {a: sf.eval_digamma(Fraction(a, q), 64, table).value for a in range(1, q)}
        gamma, log2pi, logq = +mp.euler, mp.log(2 * mp.pi), mp.log(q)
        vals_s = np.zeros(q - 1, dtype=complex)
        vals_t = np.zeros(q - 1, dtype=complex)
        for j in range(1, q - 1):
            chibar = {a: mp.expjpi(mp.mpf(-2 * j * ind[a]) / (q - 1)) for a in range(1, q)}
            if j % 2 == 1:
                b1 = mp.fsum((a * chibar[a] for a in range(1, q)), absolute=False) / q
                num = mp.fsum(chibar[a] * lg[a] for a in range(1, q))
                v = gamma + log2pi + num / b1
            else:
                num = mp.fsum(chibar[a] * sv[a] for a in range(1, q))
                den = mp.fsum(chibar[a] * lg[a] for a in range(1, q))
                v = gamma + log2pi - num / den / 2
            vals_s[j] = complex(v)
            numt = mp.fsum(mp.conj(chibar[a]) * tv[a] for a in range(1, q))
            dent = mp.fsum(mp.conj(chibar[a]) * pv[a] for a in range(1, q))
            vals_t[j] = complex(-logq - numt / dent)
    return vals_s, vals_t


@pytest.mark.parametrize("q", [int(p) for p in sieve_primes(101)[1:]])
def test_fft_pipeline_matches_brute_force(q, table128):
    ref_s, ref_t = brute_spectrum(q)
    ctx = lfunc.prime_context(q)
    bundle = lfunc.build_sequences(ctx, 128, "mp", table128)
    spec_s = lfunc.lderiv_spectrum_S(ctx, bundle)
    spec_t = lfunc.lderiv_spectrum_T(ctx, 128, "mp", table128)
    assert np.max(np.abs(spec_s.values[1:] - ref_s[1:])) < 1e-10
    assert np.max(np.abs(spec_t.values[1:] - ref_t[1:])) < 1e-10


def test_fast_and_mp_sequences_agree(table128):
    for q in (13, 101, 569):
        ctx = lfunc.prime_context(q)
        fast = lfunc.build_sequences(ctx, 128, "fast", table128)
        slow = lfunc.build_sequences(ctx, 128, "mp", table128)
        assert np.max(np.abs(fast.s_sym - slow.s_sym)) < 1e-11
        assert np.max(np.abs(fast.y_sym - slow.y_sym)) < 1e-12
        assert np.max(np.abs(fast.z_anti - slow.z_anti)) < 1e-12


def test_routes_agree_up_to_1e4(table128):
    for q in (103, 499, 1009, 2053, 4999, 9973):
        ctx = lfunc.prime_context(q)
        bundle = lfunc.build_sequences(ctx, 128, "fast", table128)
        spec_s = lfunc.lderiv_spectrum_S(ctx, bundle)
        spec_t = lfunc.lderiv_spectrum_T(ctx, 128, "fast", table128)
        assert np.max(np.abs(spec_s.values[1:] - spec_t.values[1:])) < 1e-10, q


def test_conjugate_symmetry_and_parity(table128):
    q = 101
    ctx = lfunc.prime_context(q)
    bundle = lfunc.build_sequences(ctx, 128, "fast", table128)
    spec = lfunc.lderiv_spectrum_S(ctx, bundle)
    for j in range(1, q - 1):
        assert abs(spec.values[j] - np.conj(spec.values[q - 1 - j])) < 1e-10
    # chi_j(-1) = (-1)^j against the explicit character table
    ind = {int(a): k for k, a in enumerate(ctx.index_seq)}
    for j in range(1, q - 1):
        chi_minus1 = np.exp(2j * np.pi * j * ind[q - 1] / (q - 1))
        assert abs(chi_minus1 - (-1) ** j) < 1e-12


def test_spectrum_sum_is_real(table128):
    for q in (19, 101):
        ctx = lfunc.prime_context(q)
        bundle = lfunc.build_sequences(ctx, 128, "fast", table128)
        spec = lfunc.lderiv_spectrum_S(ctx, bundle)
        assert abs(np.sum(spec.values[1:]).imag) < 1e-12
        spec_t = lfunc.lderiv_spectrum_T(ctx, 128, "fast", table128)
        assert abs(np.sum(spec_t.values[1:]).imag) < 1e-12


def test_sequence_norm_closed_forms(table128):
    for q in (101, 1531):
        ctx = lfunc.prime_context(q)
        bundle = lfunc.build_sequences(ctx, 128, "fast", table128)
        want = math.sqrt((q - 1) * (q - 2) / (6 * q))
        assert abs(np.linalg.norm(bundle.xk) - want) < 1e-10 * want
        # sup norms realised at a = 1; y_sym[a] = -log sin(pi a / q) identically
        y_inf = float(np.max(np.abs(bundle.y_sym)))
        assert abs(y_inf - (-np.log(np.sin(np.pi / q)))) < 1e-9
        w_inf = float(np.max(bundle.s_sym))
        ref = float(sf.s_reflect_sum(Fraction(1, q), 128, table128).value)
        assert abs(w_inf - ref) < 1e-9


def test_published_spot_values(table128):
    rec, *_ = lfunc.ek_for_prime(3, 128, "mp", table128)
    assert abs(rec.mq - 0.3682816) < 1e-6
    rec, *_ = lfunc.ek_for_prime(19, 128, "mp", table128)
    assert abs(rec.gq / math.log(19) - 1.626934) < 1e-5
    rec, *_ = lfunc.ek_for_prime(2053, 128, "mp", table128)
    assert abs(rec.gq_plus / math.log(2053) - 1.426263) < 1e-5
    rec, *_ = lfunc.ek_for_prime(1531, 128, "mp", table128)
    assert abs(rec.mq - 2.5048094) < 1e-6
    rec, *_ = lfunc.ek_for_prime(13, 128, "mp", table128)
    assert abs(rec.mq / math.log(math.log(13)) - 0.7392305) < 1e-6


def test_aggregate_invariants(table128):
    for q in (3, 5, 101):
        rec, ctx, bundle, spec = lfunc.ek_for_prime(q, 128, "fast", table128)
        assert rec.mq == max(rec.m_odd, rec.m_even)
        assert 1 <= rec.argmax_j <= q - 2
        mags = np.abs(spec.values[1:])
        assert abs(rec.mq - np.max(mags)) < 1e-15


def test_mq_band_for_moderate_primes(table128):
    for q in (1543, 2053, 4999):
        rec, *_ = lfunc.ek_for_prime(q, 128, "fast", table128)
        ll = math.log(math.log(q))
        assert 17 / 20 * ll < rec.mq < 5 / 4 * ll, q
