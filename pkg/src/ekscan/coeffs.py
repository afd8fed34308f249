"""Scalar constants and coefficient tables.

Everything downstream consumes the same small set of constants: harmonic
numbers H_m, the zeta values zeta(k) and zeta'(k) for integer k >= 2, the
Taylor-coefficient kernel

    L(k) = zeta(k) * H_{k-1} + zeta'(k),

exact Bernoulli numbers (for the closed forms of zeta at even integers),
the Euler-Mascheroni constant gamma, the first generalized Euler constant
gamma_1 = lim (sum_{k<=n} log(k)/k - log(n)^2/2), and zeta''(0).  A
CoefficientTable bundles them at a requested binary precision, is built
once, cached to disk, and is immutable afterwards, so it can be shared
freely across threads and processes.

zeta/zeta' are evaluated self-contained by Euler-Maclaurin summation with
explicit remainder control (no library zeta is used in the production
path); zeta at even integers additionally has the exact Bernoulli route
which doubles as a build-time cross-check.  Internally zeta(k) is stored
as zeta(k) - 1: for k beyond the working precision the full value would
round to 1.0 exactly and the stored relative information (~2^-k) would be
lost.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path

import mpmath as mp
import numpy as np

from .errors import DomainError, ResourceError, StoreError
from .sums import block_sum

CACHE_VERSION = "ekscan-coeffs v1"
DEFAULT_MAX_BITS = 256
MIN_BITS = 16
GUARD_BITS = 32

# bit budget for exact Bernoulli numerators/denominators; generous, but a
# hard stop keeps a runaway max_index from allocating without bound
BERNOULLI_LIMB_BUDGET_BITS = 1 << 22


@dataclass(frozen=True)
class Precision:
    """Target absolute error 2^-bits for series evaluations."""

    bits: int
    max_bits: int = DEFAULT_MAX_BITS

    def __post_init__(self):
        if self.bits < MIN_BITS:
            raise DomainError(f"precision must be >= {MIN_BITS} bits, got {self.bits}")
        if self.bits > self.max_bits:
            raise DomainError(
                f"precision {self.bits} exceeds configured maximum {self.max_bits}"
            )

    @property
    def working_prec(self) -> int:
        return self.bits + GUARD_BITS


def harmonic(m: int, prec: int = 113) -> mp.mpf:
    """H_m = sum_{j=1..m} 1/j by forward recurrence at `prec` bits."""
    if m < 1:
        raise DomainError(f"harmonic number needs m >= 1, got {m}")
    with mp.workprec(prec + 16):
        h = mp.mpf(0)
        for j in range(1, m + 1):
            h += mp.mpf(1) / j
        return +h


_BERNOULLI_EVEN: list[Fraction] = [Fraction(1)]  # B_0, B_2, B_4, ...


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number B_k (convention of t/(e^t - 1): B_1 = -1/2).

    Uses the binomial recurrence sum_{j<=m} C(m+1, j) B_j = 0 restricted to
    even indices (odd ones vanish beyond B_1); results are cached.
    """
    if k < 0:
        raise DomainError(f"Bernoulli index must be >= 0, got {k}")
    if k == 1:
        return Fraction(-1, 2)
    if k % 2 == 1:
        return Fraction(0)
    half = k // 2
    while len(_BERNOULLI_EVEN) <= half:
        m = len(_BERNOULLI_EVEN)
        n = 2 * m
        s = Fraction(0)
        for j in range(m):
            s += comb(n + 1, 2 * j) * _BERNOULLI_EVEN[j]
        s += Fraction(n + 1) * Fraction(-1, 2)  # B_1 term
        val = -s / (n + 1)
        if val.numerator.bit_length() + val.denominator.bit_length() > BERNOULLI_LIMB_BUDGET_BITS:
            raise ResourceError(f"Bernoulli B_{n} exceeds the rational limb budget")
        _BERNOULLI_EVEN.append(val)
    return _BERNOULLI_EVEN[half]


def _euler_maclaurin_zeta(k: int, wp: int, want_derivative: bool) -> mp.mpf:
    """zeta(k)-1 or zeta'(k) by Euler-Maclaurin with remainder < 2^-(wp-8).

    Cutoff N is chosen so the B_{2j} correction terms can reach 2^-(wp+4)
    (they bottom out around exp(-2*pi*N)); for large k they underflow after
    the first term and the routine degenerates to a short direct sum.

    The working precision grows with k: the result has magnitude ~2^-k and
    its second-largest contribution is smaller by (2/3)^k, so preserving
    the relative structure (which the zeta/zeta' inequality checks probe)
    needs about 0.585*k extra mantissa bits.
    """
    n_cut = max(32, wp // 4 + 4)
    wp = max(wp, (59 * k) // 100 + 48)
    with mp.workprec(wp + 16):
        s = mp.mpf(k)
        target = mp.mpf(2) ** (-(wp + 4))
        # direct part, skipping n=1 so the "-1" is exact
        direct = [mp.power(n, -k) for n in range(2, n_cut)]
        if want_derivative:
            direct = [-mp.log(n) * t for n, t in zip(range(2, n_cut), direct)]
        total = block_sum(direct) if direct else mp.mpf(0)
        nk = mp.power(n_cut, -k)
        ln_n = mp.log(n_cut)
        if not want_derivative:
            total += nk / 2 + nk * n_cut / (s - 1)
        else:
            total += -ln_n * nk / 2 + nk * n_cut * (-ln_n / (s - 1) - 1 / (s - 1) ** 2)
        # B_{2j} corrections: t_j = B_{2j}/(2j)! * k(k+1)...(k+2j-2) * N^{1-k-2j}
        rising = mp.mpf(k)  # product over i = 0..2j-2
        psum = mp.mpf(1) / k  # sum of 1/(k+i), for the derivative
        fact = mp.mpf(2)  # (2j)!
        npow = nk / n_cut  # N^{-k-2j+1}
        j = 1
        while True:
            b2j = mp.mpf(bernoulli(2 * j).numerator) / bernoulli(2 * j).denominator
            tj = b2j / fact * rising * npow
            dj = tj * (psum - ln_n)
            total += dj if want_derivative else tj
            if abs(tj) < target and abs(dj) < target:
                break
            j += 1
            if j > wp:
                raise ResourceError("Euler-Maclaurin corrections failed to converge")
            rising *= (k + 2 * j - 3) * (k + 2 * j - 2)
            psum += mp.mpf(1) / (k + 2 * j - 3) + mp.mpf(1) / (k + 2 * j - 2)
            fact *= (2 * j - 1) * (2 * j)
            npow /= n_cut * n_cut
        return +total


class CoefficientTable:
    """Immutable bundle of precomputed constants at one precision.

    Attributes hold mpmath values at `precision.working_prec` bits; the
    `*_f64` views are float64 roundings for the vectorised bulk kernels.
    """

    def __init__(self, precision: Precision, max_index: int):
        if max_index < precision.bits + 16:
            raise DomainError(
                f"max_index {max_index} < bits+16 = {precision.bits + 16}"
            )
        self.precision = precision
        self.max_index = max_index
        self.harmonics: list = [mp.mpf(0)] * (max_index + 1)
        self.zeta_minus1: list = [None] * (max_index + 1)
        self.zeta_prime_: list = [None] * (max_index + 1)
        self.L: list = [None] * (max_index + 1)
        self.zeta_even_: dict[int, mp.mpf] = {}
        self.gamma = None
        self.gamma1 = None
        self.zeta_second_zero_ = None
        self.L_f64: np.ndarray | None = None
        self.reflect_even_f64: np.ndarray | None = None

    # ---- spec operations -------------------------------------------------

    def harmonic(self, m: int) -> mp.mpf:
        if not 1 <= m <= self.max_index:
            raise DomainError(f"harmonic index {m} outside table range")
        return self.harmonics[m]

    def zeta(self, k: int) -> mp.mpf:
        """zeta(k); even k served from the exact Bernoulli closed form."""
        self._check_k(k)
        if k % 2 == 0:
            return self.zeta_even(k)
        return 1 + self.zeta_minus1[k]

    def zeta_minus_1(self, k: int) -> mp.mpf:
        self._check_k(k)
        return self.zeta_minus1[k]

    def zeta_prime(self, k: int) -> mp.mpf:
        self._check_k(k)
        return self.zeta_prime_[k]

    def zeta_even(self, two_l: int) -> mp.mpf:
        if two_l % 2 != 0:
            raise DomainError(f"zeta_even needs an even index, got {two_l}")
        self._check_k(two_l)
        return self.zeta_even_[two_l]

    def script_L(self, k: int) -> mp.mpf:
        """L(k) = zeta(k) H_{k-1} + zeta'(k); strictly positive."""
        self._check_k(k)
        return self.L[k]

    def gamma1_fast(self, n: int) -> mp.mpf:
        """gamma_1 with absolute error <= 2^(-n+1).

        Alternating-cancellation series: the even-index Taylor terms of two
        routes to the same value at 1/2 cancel, leaving
        -log(2)^2/2 + sum_{l>=1} L(2l+1) / ((2l+1) 4^l).
        """
        lmax = n // 2 + 2
        self._require(n, 2 * lmax + 1)
        with mp.workprec(self.precision.working_prec):
            terms = [
                self.L[2 * ell + 1] / ((2 * ell + 1) * mp.mpf(4) ** ell)
                for ell in range(1, lmax + 1)
            ]
            return +(-mp.log(2) ** 2 / 2 + block_sum(terms))

    def gamma_fast(self, n: int) -> mp.mpf:
        """Euler-Mascheroni gamma with absolute error <= 2^(-n+2).

        Companion series -log(2)/2 + 1/2 + (1/(2 log 2)) sum L(2l+1)/4^l.
        """
        lmax = n // 2 + 4
        self._require(n, 2 * lmax + 1)
        with mp.workprec(self.precision.working_prec):
            terms = [self.L[2 * ell + 1] / mp.mpf(4) ** ell for ell in range(1, lmax + 1)]
            return +(-mp.log(2) / 2 + mp.mpf(1) / 2 + block_sum(terms) / (2 * mp.log(2)))

    def zeta_second_zero(self) -> mp.mpf:
        """zeta''(0) = (-(log 2pi)^2 - pi^2/12 + 2 gamma_1 + gamma^2) / 2."""
        return self.zeta_second_zero_

    # ---- helpers -----------------------------------------------------------

    def _check_k(self, k: int) -> None:
        if not 2 <= k <= self.max_index:
            raise DomainError(f"index {k} outside table range 2..{self.max_index}")

    def _require(self, n: int, needed: int) -> None:
        if n < MIN_BITS:
            raise DomainError(f"precision must be >= {MIN_BITS} bits, got {n}")
        if needed > self.max_index:
            raise DomainError(
                f"series needs coefficients up to {needed} > max_index {self.max_index}"
            )

    @property
    def bits(self) -> int:
        return self.precision.bits


def build_table(
    bits: int,
    max_index: int | None = None,
    max_bits: int = DEFAULT_MAX_BITS,
) -> CoefficientTable:
    """Construct the full table from scratch (no cache involved)."""
    prec = Precision(bits, max_bits)
    if max_index is None:
        max_index = bits + 24
    t = CoefficientTable(prec, max_index)
    wp = prec.working_prec
    with mp.workprec(wp):
        h = mp.mpf(0)
        for m in range(1, max_index + 1):
            h += mp.mpf(1) / m
            t.harmonics[m] = +h
        for k in range(2, max_index + 1):
            zm1 = _euler_maclaurin_zeta(k, wp, want_derivative=False)
            zp = _euler_maclaurin_zeta(k, wp, want_derivative=True)
            t.zeta_minus1[k] = zm1
            t.zeta_prime_[k] = zp
            # L(k) = H_{k-1}(1 + zm1) + zeta'(k), assembled from the pieces
            # so the H_{k-1} part is immune to the 1+zm1 rounding
            t.L[k] = +(t.harmonics[k - 1] + t.harmonics[k - 1] * zm1 + zp)
        two_pi_sq = (2 * mp.pi) ** 2
        pw = two_pi_sq  # (2 pi)^{2l}
        factorial = mp.mpf(2)  # (2l)!
        for ell in range(1, max_index // 2 + 1):
            b = bernoulli(2 * ell)
            val = (-1) ** (ell + 1) * mp.mpf(b.numerator) / b.denominator * pw / (2 * factorial)
            t.zeta_even_[2 * ell] = +val
            pw *= two_pi_sq
            factorial *= (2 * ell + 1) * (2 * ell + 2)
        # cross-check the two independent zeta routes while we are here
        tol = mp.mpf(2) ** (-(bits + 4))
        for two_l in range(2, min(max_index, wp // 2) + 1, 2):
            if abs(t.zeta_even_[two_l] - 1 - t.zeta_minus1[two_l]) > tol:
                raise StoreError(
                    f"Bernoulli and Euler-Maclaurin zeta({two_l}) disagree beyond {tol}"
                )
        nconst = bits + 8
        t.gamma1 = t.gamma1_fast(nconst)
        t.gamma = t.gamma_fast(nconst)
        t.zeta_second_zero_ = +(
            (-mp.log(2 * mp.pi) ** 2 - mp.pi**2 / 12 + 2 * t.gamma1 + t.gamma**2) / 2
        )
    _attach_float_views(t)
    return t


def _attach_float_views(t: CoefficientTable) -> None:
    n = t.max_index
    lf = np.zeros(n + 1)
    for k in range(2, n + 1):
        lf[k] = float(t.L[k])
    t.L_f64 = lf
    refl = np.zeros(n // 2 + 1)
    for ell in range(1, n // 2 + 1):
        refl[ell] = float(2 * t.L[2 * ell] / ell)
    t.reflect_even_f64 = refl


# ---- cache file ------------------------------------------------------------
#
# Text format, one value per line as sign:mantissa_hex:exponent, preceded by
# a version header and the build parameters.  Any mismatch rebuilds.


def _mpf_hex(x: mp.mpf) -> str:
    sign, man, exp, _ = x._mpf_  # raw tuple: no re-rounding
    return f"{sign}:{man:x}:{exp}"


def _hex_mpf(s: str) -> mp.mpf:
    # exact reconstruction, independent of the ambient precision
    sign, man, exp = s.split(":")
    m = int(man, 16)
    return mp.make_mpf(mp.libmp.from_man_exp(-m if sign == "1" else m, int(exp)))


def save_table(t: CoefficientTable, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        CACHE_VERSION,
        f"bits {t.bits}",
        f"max_index {t.max_index}",
        f"gamma {_mpf_hex(t.gamma)}",
        f"gamma1 {_mpf_hex(t.gamma1)}",
        f"zeta_second_zero {_mpf_hex(t.zeta_second_zero_)}",
    ]
    for m in range(1, t.max_index + 1):
        lines.append(f"H {m} {_mpf_hex(t.harmonics[m])}")
    for k in range(2, t.max_index + 1):
        lines.append(f"Z {k} {_mpf_hex(t.zeta_minus1[k])}")
        lines.append(f"P {k} {_mpf_hex(t.zeta_prime_[k])}")
        lines.append(f"L {k} {_mpf_hex(t.L[k])}")
    for two_l in sorted(t.zeta_even_):
        lines.append(f"E {two_l} {_mpf_hex(t.zeta_even_[two_l])}")
    path.write_text("\n".join(lines) + "\n")


def load_table(path: str | Path) -> CoefficientTable:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or lines[0] != CACHE_VERSION:
        raise StoreError(f"{path}: unknown coefficient cache version")
    bits = int(lines[1].split()[1])
    max_index = int(lines[2].split()[1])
    t = CoefficientTable(Precision(bits), max_index)
    for line in lines[3:]:
        if not line:
            continue
        parts = line.split()
        if parts[0] == "gamma":
            t.gamma = _hex_mpf(parts[1])
        elif parts[0] == "gamma1":
            t.gamma1 = _hex_mpf(parts[1])
        elif parts[0] == "zeta_second_zero":
            t.zeta_second_zero_ = _hex_mpf(parts[1])
        elif parts[0] == "H":
            t.harmonics[int(parts[1])] = _hex_mpf(parts[2])
        elif parts[0] == "Z":
            t.zeta_minus1[int(parts[1])] = _hex_mpf(parts[2])
        elif parts[0] == "P":
            t.zeta_prime_[int(parts[1])] = _hex_mpf(parts[2])
        elif parts[0] == "L":
            t.L[int(parts[1])] = _hex_mpf(parts[2])
        elif parts[0] == "E":
            t.zeta_even_[int(parts[1])] = _hex_mpf(parts[2])
        else:
            raise StoreError(f"{path}: bad record {line!r}")
    if any(t.L[k] is None for k in range(2, max_index + 1)) or t.gamma is None:
        raise StoreError(f"{path}: incomplete coefficient cache")
    _attach_float_views(t)
    return t


def default_cache_dir() -> Path:
    env = os.environ.get("EKSCAN_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ekscan"


_TABLES: dict[tuple[int, int], CoefficientTable] = {}


def get_table(
    bits: int = 128,
    max_index: int | None = None,
    cache_dir: str | Path | None = None,
    max_bits: int = DEFAULT_MAX_BITS,
) -> CoefficientTable:
    """Cached table lookup: in-process dict first, then disk, then build."""
    if max_index is None:
        max_index = bits + 24
    key = (bits, max_index)
    if key in _TABLES:
        return _TABLES[key]
    cdir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = cdir / f"coeffs_b{bits}_m{max_index}.txt"
    t = None
    if path.exists():
        try:
            t = load_table(path)
        except (StoreError, ValueError, IndexError):
            t = None
    if t is None:
        t = build_table(bits, max_index, max_bits=max_bits)
        try:
            save_table(t, path)
        except OSError:
            pass
    _TABLES[key] = t
    return t
