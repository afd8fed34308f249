"""Greedy prime-offset sequence, admissibility sums, and the v(q) score.

The greedy sequence B starts at b(1) = 0 and extends by the smallest
integer such that, for every prime r, the residues {b(i) mod r} never
cover all r classes (an admissible set in the sieve sense; only primes
r <= n can possibly be covered by n elements, which keeps the greedy step
finite).  With C = {b(2), ..., b(2089)} one has m(C) = sum 1/b > 2, and

    v(q) = sum over 2 <= i <= count of 1/b(i) when b(i) q + 1 is prime

ranks candidate moduli: a large v(q) means q sits under many prime
offsets, which empirically accompanies small or negative Euler-Kronecker
constants.  Primality of b q + 1 is certified by the deterministic
Miller-Rabin tiers for everything below 3.3e24.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError
from .primes import DETERMINISTIC_LIMIT, is_prime, is_prime_info, sieve_primes

DEFAULT_COUNT = 2089


@dataclass(frozen=True)
class OffsetSequence:
    """First `count` greedy offsets; b[0] = b(1) = 0, strictly increasing."""

    b: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.b)

    def tail(self) -> tuple[int, ...]:
        """b(2).. — the offsets entering m(C) and v(q)."""
        return self.b[1:]


@dataclass(frozen=True)
class VScore:
    q: int
    v: float
    contributing: tuple[int, ...]
    exact: Fraction
    primality: str  # certification regime used


def greedy_offsets(count: int) -> OffsetSequence:
    """First `count` elements of the greedy admissible offset sequence."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    primes = [int(p) for p in sieve_primes(max(count, 2))]
    used: dict[int, set[int]] = {r: {0} for r in primes}
    b = [0]
    cand = 0
    while len(b) < count:
        n = len(b) + 1
        critical = [r for r in primes if r <= n and len(used[r]) == r - 1]
        cand = b[-1]
        while True:
            cand += 1
            if all((cand % r) in used[r] for r in critical):
                break
        b.append(cand)
        for r in primes:
            used[r].add(cand % r)
    return OffsetSequence(tuple(b))


def is_admissible(values: tuple[int, ...] | list[int], r_max: int | None = None) -> bool:
    """Residue-coverage re-check: every prime r leaves at least one class free."""
    n = len(values)
    top = r_max if r_max is not None else n
    for r in sieve_primes(top):
        r = int(r)
        if len({v % r for v in values}) >= r:
            return False
    return True


def m_of(values) -> Fraction:
    """m(A) = sum 1/a over a set of positive integers, exact."""
    vals = list(values)
    if any(v == 0 for v in vals):
        raise DomainError("m(A) is defined for positive offsets only (0 excluded)")
    if any(v < 0 for v in vals):
        raise DomainError("offsets must be positive")
    return sum((Fraction(1, v) for v in vals), Fraction(0))


def v_score(q: int, seq: OffsetSequence | None = None, count: int | None = None) -> VScore:
    """v(q) over the first `count` greedy offsets (default 2089)."""
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise DomainError(f"{q} is not an odd prime")
    if seq is None:
        seq = greedy_offsets(count or DEFAULT_COUNT)
    elif count is not None and seq.count < count:
        raise DomainError(f"sequence holds {seq.count} < requested {count} offsets")
    tail = seq.tail() if count is None else seq.b[1:count]
    contributing = []
    regime = "mr-deterministic" if tail and tail[-1] * q + 1 < DETERMINISTIC_LIMIT else "mr-probable-64"
    for b in tail:
        ok, _how = is_prime_info(b * q + 1)
        if ok:
            contributing.append(b)
    exact = sum((Fraction(1, b) for b in contributing), Fraction(0))
    return VScore(q, float(exact), tuple(contributing), exact, regime)


_DEFAULT_SEQ: OffsetSequence | None = None


def default_offsets() -> OffsetSequence:
    """Process-wide cached greedy_offsets(2089)."""
    global _DEFAULT_SEQ
    if _DEFAULT_SEQ is None or _DEFAULT_SEQ.count < DEFAULT_COUNT:
        _DEFAULT_SEQ = greedy_offsets(DEFAULT_COUNT)
    return _DEFAULT_SEQ


def v_band(v: float) -> str:
    """Five-way classification used by the scan exports."""
    if v <= 0.25:
        return "v<=0.25"
    if v <= 0.5:
        return "0.25<v<=0.5"
    if v <= 0.75:
        return "0.5<v<=0.75"
    if v <= 1.0:
        return "0.75<v<=1"
    return "v>1"
