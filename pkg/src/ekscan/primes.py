"""Primality, factorisation and primitive-root utilities.

Primality is decided by trial division against a small prime table followed
by Miller-Rabin with a deterministic base set: the 13-prime base
{2,...,41} is a proven witness set for every n < 3.317e24, far above any
modulus this package scans, so results in that range are certificates, not
probabilities.  Larger inputs fall back to 64 strong-probable-prime rounds;
:func:`is_prime_info` reports which regime was used.
"""
from __future__ import annotations

import random
from math import gcd, isqrt

import numpy as np

from .errors import DomainError, ResourceError

# deterministic Miller-Rabin witness tiers (threshold, bases)
_MR_TIERS = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (9080191, (31, 73)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (4759123141, (2, 7, 61)),
    (1122004669633, (2, 13, 23, 1662803)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318665857834031151167461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
    (3317044064679887385961981, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)),
)
DETERMINISTIC_LIMIT = _MR_TIERS[-1][0]
PROBABLE_ROUNDS = 64

_TRIAL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def _mr_witness(n: int, a: int, d: int, r: int) -> bool:
    """Return True if a witnesses compositeness of n = 2^r * d + 1."""
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime_info(n: int) -> tuple[bool, str]:
    """Primality of n plus the method used ('trial', 'mr-deterministic',
    'mr-probable-64')."""
    if n < 2:
        return False, "trial"
    for p in _TRIAL_PRIMES:
        if n == p:
            return True, "trial"
        if n % p == 0:
            return False, "trial"
    if n < _TRIAL_PRIMES[-1] ** 2:
        return True, "trial"
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < DETERMINISTIC_LIMIT:
        for bound, bases in _MR_TIERS:
            if n < bound:
                break
        for a in bases:
            if _mr_witness(n, a % n, d, r):
                return False, "mr-deterministic"
        return True, "mr-deterministic"
    rng = random.Random(n)
    for _ in range(PROBABLE_ROUNDS):
        a = rng.randrange(2, n - 1)
        if _mr_witness(n, a, d, r):
            return False, "mr-probable-64"
    return True, "mr-probable-64"


def is_prime(n: int) -> bool:
    return is_prime_info(n)[0]


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit (ascending int64 array)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def primes_in_range(lo: int, hi: int) -> np.ndarray:
    """Primes q with lo <= q <= hi."""
    ps = sieve_primes(hi)
    return ps[ps >= lo]


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation {p: exponent} of n >= 1."""
    if n < 1:
        raise DomainError(f"cannot factorise {n}")
    out: dict[int, int] = {}
    for p in range(2, 10000):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.extend((d, m // d))
    return out


def smallest_primitive_root(q: int) -> int:
    """Smallest primitive root modulo an odd prime q."""
    if q < 3 or not is_prime(q):
        raise DomainError(f"{q} is not an odd prime")
    parts = [(q - 1) // p for p in factorize(q - 1)]
    g = 2
    while True:
        if all(pow(g, e, q) != 1 for e in parts):
            return g
        g += 1


def power_sequence(g: int, q: int) -> np.ndarray:
    """a_k = g^k mod q for k = 0..q-2, as an int64 array.

    Built baby-step/giant-step so the Python-level loop is O(sqrt(q));
    the cross products stay below 2^63 for q < 3e9.
    """
    n = q - 1
    if n <= 1:
        return np.ones(max(n, 1), dtype=np.int64)
    if q > 3_000_000_000:
        raise ResourceError("power_sequence int64 path requires q < 3e9")
    m = isqrt(n) + 1
    baby = np.empty(m, dtype=np.int64)
    acc = 1
    for r in range(m):
        baby[r] = acc
        acc = acc * g % q
    giant = np.empty(m, dtype=np.int64)
    step = pow(g, m, q)
    acc = 1
    for i in range(m):
        giant[i] = acc
        acc = acc * step % q
    seq = (giant[:, None] * baby[None, :]) % q
    return seq.reshape(-1)[:n]
