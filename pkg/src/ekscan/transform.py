"""Arbitrary-length discrete Fourier transform engine.

Character sums over a prime modulus q need transforms of length q-1 or
(q-1)/2, and those lengths routinely contain one large prime factor, so a
fixed-radix FFT is not enough.  The built-in engine combines

  * mixed-radix Cooley-Tukey steps for every prime factor <= 37 (small
    DFT matrices applied batched over numpy), and
  * Bluestein's chirp transform for any remaining large prime part:
    X[j] = a[j] * (x a  *conv*  conj(a))[j] with a[t] = e^(s i pi t^2 / N),
    the linear convolution done by zero-padded power-of-two transforms.
    The chirp phases use t^2 reduced mod 2N in exact integers, which keeps
    the twiddle accuracy flat in N.

Conventions: forward is X[j] = sum_k x[k] e^(-2 pi i jk/N) (unnormalised),
inverse carries the 1/N.  The engine works on complex128; the accuracy
module's error model is parameterised by the matching machine epsilon.

numpy's pocketfft implements the identical contract and may be selected as
a high-performance backend (EKSCAN_FFT_BACKEND=pocketfft or per-plan); the
built-in engine remains the reference and the test oracle.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError, ResourceError
from .primes import factorize

RADIX_LIMIT = 13  # largest prime handled by a dense Cooley-Tukey butterfly;
# bigger primes go through the chirp path, whose padded power-of-two
# transforms carry a visibly smaller rounding constant than a wide butterfly
DEFAULT_MAX_LENGTH = 1 << 28

_BACKENDS = ("builtin", "pocketfft")


def default_backend() -> str:
    b = os.environ.get("EKSCAN_FFT_BACKEND", "builtin")
    if b not in _BACKENDS:
        raise DomainError(f"unknown FFT backend {b!r}; choose from {_BACKENDS}")
    return b


@dataclass(frozen=True)
class TransformPlan:
    """Immutable execution recipe for one transform length/direction."""

    length: int
    direction: str  # 'forward' | 'inverse'
    factors: tuple[int, ...]  # ascending prime factorisation of length
    strategy: tuple[tuple[int, str], ...]  # (prime, 'radix'|'chirp')
    backend: str = "builtin"

    @property
    def sign(self) -> int:
        return -1 if self.direction == "forward" else 1


def plan(
    n: int,
    direction: str = "forward",
    backend: str | None = None,
    max_length: int = DEFAULT_MAX_LENGTH,
    force: str | None = None,
) -> TransformPlan:
    """Build a TransformPlan for length n.

    Smooth factors get mixed-radix passes; any prime factor above
    RADIX_LIMIT falls back to the chirp transform.  `force` overrides the
    per-factor choice ('chirp' pushes the whole length through Bluestein,
    'radix' refuses lengths that would need it).  Planning allocates
    nothing; execute-time memory is O(n) complex entries (about 4n for
    chirp lengths).
    """
    if n < 1:
        raise DomainError(f"transform length must be >= 1, got {n}")
    if n > max_length:
        raise ResourceError(f"transform length {n} exceeds budget {max_length}")
    if direction not in ("forward", "inverse"):
        raise DomainError(f"direction must be forward|inverse, got {direction!r}")
    fac = factorize(n) if n > 1 else {}
    factors = tuple(sorted(p for p, e in fac.items() for _ in range(e)))
    if force == "chirp" and n > 1:
        strategy = ((n, "chirp"),)
    elif force == "radix":
        if any(p > RADIX_LIMIT for p in factors):
            raise DomainError(f"length {n} has a prime factor beyond radix limit")
        strategy = tuple((p, "radix") for p in sorted(fac))
    else:
        strategy = tuple(
            (p, "radix" if p <= RADIX_LIMIT else "chirp") for p in sorted(fac)
        )
    return TransformPlan(n, direction, factors, strategy, backend or default_backend())


def execute(p: TransformPlan, seq: np.ndarray) -> np.ndarray:
    """Apply the planned transform to one sequence."""
    x = np.asarray(seq, dtype=np.complex128)
    if x.ndim != 1 or x.shape[0] != p.length:
        raise ContractError(
            f"sequence length {x.shape} does not match plan length {p.length}"
        )
    if not np.all(np.isfinite(x)):
        raise ContractError("transform input must be finite")
    if p.backend == "pocketfft":
        out = np.fft.fft(x) if p.sign == -1 else np.fft.ifft(x)
        return out
    forced_chirp = bool(p.strategy) and p.strategy[0][1] == "chirp" and p.strategy[0][0] == p.length
    if forced_chirp and p.length > 1:
        out = _bluestein(x[None, :], p.sign)[0]
    else:
        out = _dft_batch(x[None, :], p.sign)[0]
    if p.sign == 1:
        out = out / p.length
    return out


def _dft_batch(x: np.ndarray, sign: int) -> np.ndarray:
    """Unnormalised DFT with exponent sign, batched over axis 0."""
    b, n = x.shape
    if n == 1:
        return x.copy()
    p = _smallest_factor(n)
    if p > RADIX_LIMIT:
        # all remaining factors are large; hand the whole length to chirp
        return _bluestein(x, sign)
    m = n // p
    # decimation in time: x[c::p] are the p subsequences of length m
    sub = x.reshape(b, m, p).transpose(0, 2, 1).reshape(b * p, m)
    sub = _dft_batch(sub, sign).reshape(b, p, m)
    # twiddles w^{rc}, w = e^{sign 2 pi i / n}, r < m, c < p; products are
    # reduced mod n in exact integers before the angle is formed
    r = np.arange(m, dtype=np.int64)
    c = np.arange(p, dtype=np.int64)
    w_rc = np.exp(sign * 2j * np.pi * ((c[:, None] * r[None, :]) % n) / n)
    sub = sub * w_rc[None, :, :]
    # p-point DFT across the c axis for every (t, r)
    f_p = np.exp(sign * 2j * np.pi * ((c[:, None] * c[None, :]) % p) / p)
    out = np.einsum("tc,bcr->btr", f_p, sub)
    return out.reshape(b, n)


def _bluestein(x: np.ndarray, sign: int) -> np.ndarray:
    """Chirp transform of odd/awkward length via padded radix-2 convolution."""
    b, n = x.shape
    m = 1 << (2 * n - 1).bit_length()
    # chirp a[t] = e^{sign i pi t^2 / n}; reduce t^2 mod 2n exactly
    t = np.arange(n, dtype=np.int64)
    tsq = (t * t) % (2 * n)
    a = np.exp(sign * 1j * np.pi * tsq / n)
    u = np.zeros((b, m), dtype=np.complex128)
    u[:, :n] = x * a[None, :]
    v = np.zeros(m, dtype=np.complex128)
    v[:n] = np.conj(a)
    v[m - n + 1 :] = np.conj(a[n - 1 : 0 : -1])
    cu = _dft_batch(u, -1)
    cv = _dft_batch(v[None, :], -1)
    w = _dft_batch(cu * cv, 1) / m
    return w[:, :n] * a[None, :]


def _smallest_factor(n: int) -> int:
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return p
    return min(factorize(n))


def twiddled_half_transform(seq: np.ndarray, q: int, backend: str | None = None) -> np.ndarray:
    """Y[m] = sum_{k<N} x[k] e^{2 pi i (2m+1) k/(q-1)}, N = (q-1)/2.

    Premultiplying by e^{2 pi i k/(q-1)} turns the odd-frequency sum into a
    plain positive-exponent length-N transform; these are exactly the
    odd-character sums under decimation in frequency.
    """
    x = np.asarray(seq, dtype=np.complex128)
    n = (q - 1) // 2
    if q < 3 or q % 2 == 0:
        raise DomainError(f"modulus must be an odd prime, got {q}")
    if x.shape != (n,):
        raise ContractError(f"need length (q-1)/2 = {n}, got {x.shape}")
    k = np.arange(n)
    pre = x * np.exp(2j * np.pi * k / (q - 1))
    p = plan(n, "inverse", backend=backend)
    return execute(p, pre) * n  # unnormalised positive-exponent transform
