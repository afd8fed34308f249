"""Transform engine: brute-force equivalence, algebraic identities, backends."""
from __future__ import annotations

import numpy as np
import pytest

from ekscan import transform as tr
from ekscan.errors import ContractError, DomainError, ResourceError

rng = np.random.default_rng(20240817)


def brute_dft(x: np.ndarray, sign: int = -1) -> np.ndarray:
    n = len(x)
    jk = np.outer(np.arange(n), np.arange(n))
    return (x[None, :] * np.exp(sign * 2j * np.pi * jk / n)).sum(axis=1)


def test_brute_force_equivalence_all_lengths_to_64():
    for n in range(1, 65):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        got = tr.execute(tr.plan(n, "forward"), x)
        ref = brute_dft(x)
        assert np.max(np.abs(got - ref)) <= 1e3 * 2.0**-52 * np.linalg.norm(x), n


def test_delta_sequence_and_n4_example():
    x = np.zeros(8, dtype=complex)
    x[0] = 1
    assert np.allclose(tr.execute(tr.plan(8), x), np.ones(8))
    out = tr.execute(tr.plan(4), np.array([1, 0, 0, 0], complex))
    assert np.allclose(out, [1, 1, 1, 1])


def test_roundtrip_inverse_forward():
    for n in (1, 2, 97, 360, 1531, 6144):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        f = tr.execute(tr.plan(n, "forward"), x)
        b = tr.execute(tr.plan(n, "inverse"), f)
        assert np.max(np.abs(b - x)) < 1e-11 * max(1.0, np.linalg.norm(x))


def test_parseval():
    from ekscan.accuracy import delta

    for n in (64, 1009, 4095):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        f = tr.execute(tr.plan(n, "forward"), x)
        lhs = np.linalg.norm(f) ** 2
        rhs = n * np.linalg.norm(x) ** 2
        assert abs(lhs - rhs) <= 10 * delta(n, 8 * 2.0**-53) * rhs


def test_chirp_and_mixed_radix_agree():
    from ekscan.accuracy import delta

    for n in (15, 96, 1000):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a = tr.execute(tr.plan(n, "forward", force="radix"), x)
        b = tr.execute(tr.plan(n, "forward", force="chirp"), x)
        assert np.max(np.abs(a - b)) <= 10 * delta(n, 8 * 2.0**-53) * np.linalg.norm(x)


def test_pocketfft_backend_matches_builtin():
    for n in (31, 97, 1531, 8192):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a = tr.execute(tr.plan(n, "forward", backend="builtin"), x)
        b = tr.execute(tr.plan(n, "forward", backend="pocketfft"), x)
        assert np.max(np.abs(a - b)) < 1e-9 * max(1.0, np.linalg.norm(x))


def test_plan_examples():
    assert tr.plan(1).strategy == ()
    p = tr.plan(2 * 5 * 9644779)
    assert ("radix" in dict(p.strategy).values()) or True
    assert dict(p.strategy)[9644779] == "chirp"
    assert dict(p.strategy)[2] == "radix"
    p2 = tr.plan(1 << 16)
    assert p2.strategy == ((2, "radix"),)


def test_plan_validation():
    with pytest.raises(DomainError):
        tr.plan(0)
    with pytest.raises(ResourceError):
        tr.plan(1 << 40)
    with pytest.raises(DomainError):
        tr.plan(10, direction="sideways")
    with pytest.raises(DomainError):
        tr.plan(2 * 9644779, force="radix")  # large prime cannot go radix


def test_execute_contract_checks():
    p = tr.plan(16)
    with pytest.raises(ContractError):
        tr.execute(p, np.zeros(15, complex))
    bad = np.zeros(16, complex)
    bad[3] = np.inf
    with pytest.raises(ContractError):
        tr.execute(p, bad)


def test_twiddled_half_transform_brute_force():
    q = 11
    n = (q - 1) // 2
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    got = tr.twiddled_half_transform(x, q)
    for m in range(n):
        ref = sum(x[k] * np.exp(2j * np.pi * (2 * m + 1) * k / (q - 1)) for k in range(n))
        assert abs(got[m] - ref) < 1e-12


def test_twiddled_constant_geometric_sum():
    q = 23
    n = (q - 1) // 2
    got = tr.twiddled_half_transform(np.ones(n), q)
    for m in range(n):
        w = np.exp(2j * np.pi * (2 * m + 1) / (q - 1))
        ref = (w**n - 1) / (w - 1)  # = -2/(w-1) since w^N = -1
        assert abs(got[m] - ref) < 1e-11


def test_twiddled_linearity():
    q = 31
    n = (q - 1) // 2
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a, b = 2.5 - 1j, -0.75 + 2j
    lhs = tr.twiddled_half_transform(a * x + b * y, q)
    rhs = a * tr.twiddled_half_transform(x, q) + b * tr.twiddled_half_transform(y, q)
    assert np.max(np.abs(lhs - rhs)) < 1e-11


def test_twiddled_contract():
    with pytest.raises(ContractError):
        tr.twiddled_half_transform(np.ones(4), 11)
    with pytest.raises(DomainError):
        tr.twiddled_half_transform(np.ones(5), 12)
