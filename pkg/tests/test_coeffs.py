"""Coefficient table: exact values, certified inequalities, cache behaviour."""
from __future__ import annotations

from fractions import Fraction

import mpmath as mp
import pytest

from ekscan import coeffs
from ekscan.errors import DomainError


def test_harmonic_small_values():
    assert coeffs.harmonic(1) == 1
    assert coeffs.harmonic(2) == 1.5
    # exact rational oracle: H_4 = 25/12
    with mp.workprec(160):
        assert abs(coeffs.harmonic(4, 128) - mp.mpf(25) / 12) < mp.mpf(2) ** -120


def test_harmonic_rejects_zero():
    with pytest.raises(DomainError):
        coeffs.harmonic(0)


def test_bernoulli_known_values():
    assert coeffs.bernoulli(0) == 1
    assert coeffs.bernoulli(1) == Fraction(-1, 2)
    assert coeffs.bernoulli(2) == Fraction(1, 6)
    assert coeffs.bernoulli(12) == Fraction(-691, 2730)
    for k in (3, 5, 7, 99):
        assert coeffs.bernoulli(k) == 0


def test_bernoulli_recurrence_against_mpmath():
    with mp.workprec(220):
        for k in range(2, 60, 2):
            ours = coeffs.bernoulli(k)
            ref = mp.bernoulli(k)
            rel = abs(mp.mpf(ours.numerator) / ours.denominator - ref) / abs(ref)
            assert rel < mp.mpf(10) ** -35, k


def test_zeta_even_closed_forms(table128):
    with mp.workprec(160):
        assert abs(table128.zeta_even(2) - mp.pi**2 / 6) < mp.mpf(2) ** -140
        assert abs(table128.zeta_even(4) - mp.pi**4 / 90) < mp.mpf(2) ** -140
        # large even index: 1 within 2^-bits
        assert abs(table128.zeta_even(140) - 1) < mp.mpf(2) ** -128


def test_zeta_routes_agree(table128):
    # even k must route through the Bernoulli closed form
    assert table128.zeta(2) == table128.zeta_even(2)
    with mp.workprec(200):
        ref = mp.mpf("1.6449340668482264364724151666460251892")
        assert abs(table128.zeta(2) - ref) < mp.mpf(2) ** -120


def test_zeta_odd_against_independent_oracle(table128):
    with mp.workprec(200):
        for k in (3, 5, 7, 9, 21, 51, 101):
            assert abs(table128.zeta(k) - mp.zeta(k)) < mp.mpf(2) ** -(128 + 4)


def test_zeta_two_cutoff_self_consistency():
    # Euler-Maclaurin at two different working precisions (hence cutoffs)
    a = coeffs._euler_maclaurin_zeta(3, 128, want_derivative=False)
    b = coeffs._euler_maclaurin_zeta(3, 192, want_derivative=False)
    assert abs(a - b) < mp.mpf(2) ** -128


def test_zeta_prime_against_independent_oracle(table128):
    with mp.workprec(200):
        ref = mp.mpf("-0.93754825431584375370257409456786497790")
        assert abs(table128.zeta_prime(2) - ref) < mp.mpf(2) ** -120
        for k in (3, 4, 11, 40, 97):
            assert abs(table128.zeta_prime(k) - mp.zeta(k, derivative=1)) < mp.mpf(2) ** -(128 + 4)


def test_zeta_prime_negative_and_tiny_for_large_k(table_wide):
    # correct rendering of the "only H_{k-1} matters after ~420 terms" regime:
    # |zeta'(k)| < 1.43 * 2^-k, so ~1e-127 at k=420 (not smaller)
    zp420 = table_wide.zeta_prime(420)
    assert zp420 < 0
    assert abs(zp420) < mp.mpf("1.43") * mp.mpf(2) ** -420
    assert abs(zp420) > mp.mpf(2) ** -421
    # L(k) reduces to H_{k-1} up to ~2^-419 there
    diff = table_wide.script_L(420) - table_wide.harmonic(419)
    assert abs(diff) < mp.mpf(2) ** -410


def test_lemma_inequalities_k_3_to_500(table_wide):
    with mp.workprec(700):
        for k in range(3, 501):
            zm1 = table_wide.zeta_minus_1(k)
            assert mp.mpf(2) ** -k < zm1 < mp.mpf(2) ** (1 - k), k
        lo_c = mp.log(2) + mp.mpf(2) / 3 * mp.log(3)
        for k in range(4, 501):
            zp = table_wide.zeta_prime(k)
            assert -lo_c / mp.mpf(2) ** k < zp < -mp.log(2) / mp.mpf(2) ** k, k


def test_script_l_positive_throughout(table_wide):
    for k in range(2, table_wide.max_index + 1):
        assert table_wide.script_L(k) > 0, k


def test_script_l_value(table128):
    with mp.workprec(200):
        want = table128.zeta(2) * 1 + table128.zeta_prime(2)
        assert abs(table128.script_L(2) - want) < mp.mpf(2) ** -150
        assert abs(table128.script_L(2) - mp.mpf("0.70738581253239")) < 1e-13


def _gamma1_limit_oracle(prec: int = 220) -> mp.mpf:
    """gamma_1 from its limit definition, Euler-Maclaurin accelerated.

    sum_{k<=N} log k/k = (log N)^2/2 + gamma_1 + (log N)/(2N)
                         + sum_j B_2j/(2j)! d^{2j-1}/dk^{2j-1}[(log k)/k]_N + R
    with (log u)/u derivatives from the (a + b log u)/u^m recurrence.
    """
    with mp.workprec(prec):
        n = 40000
        s = mp.mpf(0)
        for k in range(2, n + 1):
            s += mp.log(k) / k
        c, d, m = mp.mpf(0), mp.mpf(1), 1  # (c + d log u)/u^m  == (log u)/u
        derivs = []
        lu = mp.log(n)
        for _ in range(40):
            derivs.append((c + d * lu) / mp.mpf(n) ** m)
            c, d, m = d - m * c, -m * d, m + 1
        tail = -derivs[0] / 2  # (f(N)/2 correction: sum included f(N) fully)
        fact = mp.mpf(2)
        for j in range(1, 18):
            tail -= mp.bernoulli(2 * j) / fact * derivs[2 * j - 1]
            fact *= (2 * j + 1) * (2 * j + 2)
        return +(s - mp.log(n) ** 2 / 2 + tail)


def _gamma_limit_oracle(prec: int = 220) -> mp.mpf:
    """gamma = H_N - log N - 1/(2N) + sum_j B_2j/(2j N^2j), accelerated."""
    with mp.workprec(prec):
        n = 40000
        h = mp.mpf(0)
        for k in range(1, n + 1):
            h += mp.mpf(1) / k
        out = h - mp.log(n) - mp.mpf(1) / (2 * n)
        for j in range(1, 18):
            out += mp.bernoulli(2 * j) / (2 * j * mp.mpf(n) ** (2 * j))
        return +out


def test_gamma1_fast_against_accelerated_limit(table128):
    oracle = _gamma1_limit_oracle()
    got = table128.gamma1_fast(128)
    assert abs(got - oracle) < mp.mpf(10) ** -30
    # refinement never contradicts earlier digits
    assert abs(table128.gamma1_fast(16) - got) < mp.mpf(2) ** -15
    assert abs(table128.gamma1_fast(64) - got) < mp.mpf(2) ** -63


def test_gamma_fast_against_accelerated_limit(table128):
    oracle = _gamma_limit_oracle()
    got = table128.gamma_fast(128)
    assert abs(got - oracle) < mp.mpf(10) ** -30
    assert mp.mpf("0.5") < got < mp.mpf("0.6")
    assert abs(table128.gamma_fast(16) - got) < mp.mpf(2) ** -14
    assert abs(table128.gamma_fast(64) - got) < mp.mpf(2) ** -62


def test_fast_constants_match_library_values(table128):
    with mp.workprec(200):
        assert abs(table128.gamma - mp.euler) < mp.mpf(2) ** -130
        assert abs(table128.gamma1 - mp.stieltjes(1)) < mp.mpf(2) ** -130


def test_zeta_second_zero(table128):
    with mp.workprec(200):
        v = table128.zeta_second_zero()
        assert abs(v - mp.mpf("-2.00635645590858485")) < 1e-16
        assert abs(v - mp.zeta(0, 1, 2)) < mp.mpf(2) ** -120
        assert v < 0


def test_digamma_harmonic_identity(table128):
    # psi(k) + gamma = H_{k-1}: psi at integers is reached from the certified
    # evaluator through the duplication identity psi(1) = psi(1/2) + 2 log 2
    # and the step recurrence; harmonic numbers on the right come from the
    # table, the 1/j steps on the left are summed independently
    from fractions import Fraction

    from ekscan.specfun import eval_digamma

    with mp.workprec(200):
        psi_one = eval_digamma(Fraction(1, 2), 128, table128).value + 2 * mp.log(2)
        tol = mp.mpf(2) ** -(128 - 4)
        for k in range(2, 40):
            steps = mp.fsum(mp.mpf(1) / j for j in range(1, k))
            psi_k = psi_one + steps
            assert abs(psi_k + table128.gamma - table128.harmonic(k - 1)) < tol, k


def test_zeta_large_k_is_one_within_bits(table128):
    with mp.workprec(300):
        assert abs(table128.zeta(139) - 1) < mp.mpf(2) ** -128
        assert abs(table128.zeta_minus_1(139)) < mp.mpf(2) ** -128


def test_precision_validation():
    with pytest.raises(DomainError):
        coeffs.Precision(8)
    with pytest.raises(DomainError):
        coeffs.Precision(512)
    assert coeffs.Precision(512, max_bits=1024).bits == 512


def test_table_invariant_max_index():
    with pytest.raises(DomainError):
        coeffs.CoefficientTable(coeffs.Precision(128), 100)


def test_cache_roundtrip(tmp_path):
    t = coeffs.build_table(32, max_index=64)
    path = tmp_path / "c.txt"
    coeffs.save_table(t, path)
    t2 = coeffs.load_table(path)
    assert t2.bits == 32 and t2.max_index == 64
    for k in range(2, 65):
        assert t.L[k] == t2.L[k]
        assert t.zeta_minus1[k] == t2.zeta_minus1[k]
    assert t.gamma == t2.gamma and t.gamma1 == t2.gamma1
    # corrupted version header forces a rebuild path
    path.write_text("bogus v9\n" + path.read_text())
    with pytest.raises(Exception):
        coeffs.load_table(path)
