"""Greedy offsets, admissibility, m(A), v(q), and the primality backend."""
from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ekscan import offsets
from ekscan.errors import DomainError
from ekscan.primes import is_prime, is_prime_info, sieve_primes


def test_greedy_prefix():
    assert offsets.greedy_offsets(1).b == (0,)
    assert offsets.greedy_offsets(4).b == (0, 2, 6, 8)
    seq = offsets.greedy_offsets(15)
    assert seq.b == (0, 2, 6, 8, 12, 18, 20, 26, 30, 32, 36, 42, 48, 50, 56)


def test_greedy_prefixes_admissible(greedy2089):
    # every prefix avoids a full residue system for every prime r <= 50
    b = greedy2089.b
    for n in (4, 16, 64, 256, 2089):
        prefix = b[:n]
        for r in sieve_primes(50):
            r = int(r)
            assert len({v % r for v in prefix}) <= r - 1, (n, r)


def test_m_of_examples():
    assert offsets.m_of([1]) == 1
    assert offsets.m_of({2, 6, 8}) == Fraction(19, 24)
    with pytest.raises(DomainError):
        offsets.m_of([0, 2])


def test_m_of_full_greedy_exceeds_two(greedy2089):
    m_c = offsets.m_of(greedy2089.tail())
    assert m_c > 2
    # the margin is razor thin, which is why the sum is exact rational
    assert m_c - 2 < Fraction(1, 10000)


def test_v_score_published_value(greedy2089):
    vs = offsets.v_score(50040955631, greedy2089)
    assert abs(vs.v - 1.2194) < 1e-3
    assert vs.primality == "mr-deterministic"
    assert all(b * 50040955631 + 1 and is_prime(b * 50040955631 + 1) for b in vs.contributing)


def test_v_score_monotone_under_extension(greedy2089):
    q = 2053
    v_short = offsets.v_score(q, greedy2089, count=500).v
    v_full = offsets.v_score(q, greedy2089).v
    assert v_full >= v_short


def test_v_score_rejects_composite(greedy2089):
    with pytest.raises(DomainError):
        offsets.v_score(15, greedy2089)


def test_v_band_edges():
    assert offsets.v_band(0.1) == "v<=0.25"
    assert offsets.v_band(0.25) == "v<=0.25"
    assert offsets.v_band(0.3) == "0.25<v<=0.5"
    assert offsets.v_band(0.6) == "0.5<v<=0.75"
    assert offsets.v_band(0.9) == "0.75<v<=1"
    assert offsets.v_band(1.2) == "v>1"


KNOWN_PRIMES = [2, 3, 5, 97, 7919, 104729, 2**31 - 1, 67280421310721, 2**89 - 1]
KNOWN_COMPOSITE = [1, 4, 561, 25326001, 3215031751, 341550071728321, 2**67 - 1]


def test_primality_known_values():
    for p in KNOWN_PRIMES:
        assert is_prime(p), p
    for c in KNOWN_COMPOSITE:
        assert not is_prime(c), c


def test_primality_regimes():
    assert is_prime_info(97)[1] == "trial"
    assert is_prime_info(67280421310721)[1] == "mr-deterministic"
    ok, how = is_prime_info(2**89 - 1)
    assert ok and how == "mr-probable-64"


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=200000))
def test_primality_matches_trial_division(n):
    ref = n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))
    assert is_prime(n) == ref
