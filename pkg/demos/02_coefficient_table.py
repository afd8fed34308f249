#!/usr/bin/env python3
"""The shared coefficient table and the fast constant series.

Everything the evaluators need is precomputed once per precision: harmonic
numbers, zeta(k) and zeta'(k) by self-contained Euler-Maclaurin summation,
the kernel L(k) = zeta(k) H_{k-1} + zeta'(k), exact Bernoulli numbers, and
the constants gamma, gamma_1, zeta''(0).  The table is cached on disk and
immutable afterwards.
"""
import mpmath as mp

from ekscan import coeffs

table = coeffs.get_table(128)
mp.mp.dps = 40

print("== headline constants (128-bit build) ==")
print("gamma      =", mp.nstr(table.gamma, 40))
print("gamma_1    =", mp.nstr(table.gamma1, 40))
print("zeta''(0)  =", mp.nstr(table.zeta_second_zero(), 40))

print("\n== the coefficient kernel ==")
for k in (2, 3, 10, 100):
    print(f"L({k:3d}) = {mp.nstr(table.script_L(k), 25)}")

print("\n== zeta inequality bands (sanity windows, never violated) ==")
for k in (5, 50, 150):
    zm1 = table.zeta_minus_1(k)
    print(f"2^-{k} < zeta({k})-1 = {mp.nstr(zm1, 8)} < 2^{1 - k}  "
          f"({mp.nstr(zm1 * mp.mpf(2) ** k, 6)} in units of 2^-{k})")

print("\n== exact Bernoulli numbers feed zeta at even integers ==")
for k in (2, 4, 12):
    print(f"B_{k} = {coeffs.bernoulli(k)},  zeta({k}) = {mp.nstr(table.zeta_even(k), 25)}")

print("\n== fast companion series for gamma_1 and gamma ==")
print("about n/2 summands give n-bit precision:")
for n in (32, 64, 128):
    g1 = table.gamma1_fast(n)
    err = abs(g1 - table.gamma1)
    print(f"  gamma_1 at n={n:3d}: error {mp.nstr(err, 3)}  (certified <= 2^-{n - 1})")
for n in (32, 64, 128):
    g = table.gamma_fast(n)
    err = abs(g - table.gamma)
    print(f"  gamma   at n={n:3d}: error {mp.nstr(err, 3)}  (certified <= 2^-{n - 2})")
