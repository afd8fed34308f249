#!/usr/bin/env python3
"""Certified special-function evaluation.

S(x) is the log-squared counterpart of log Gamma: it solves
S(x+1) = S(x) - (log x)^2 with S(1) = 0, and R(x) = -zeta''(0) - S(x) is
the logarithm of the generalized gamma function Gamma_1(x) = exp(R(x)).
T(x) plays the digamma role: T(x+1) = T(x) + (log x)/x.  Every evaluator
returns a value with a certified truncation bound 2^-bits.
"""
from fractions import Fraction

import mpmath as mp

from ekscan import coeffs, specfun as sf

table = coeffs.get_table(128)
mp.mp.dps = 40

print("== values with certified error bounds ==")
for fn, name in ((sf.eval_s, "S"), (sf.eval_t, "T"), (sf.eval_r, "R"), (sf.eval_psi1, "psi1")):
    res = fn(Fraction(1, 3), 128, table)
    print(f"{name}(1/3)  = {mp.nstr(res.value, 30)}   (+/- 2^-128, {res.terms_used} terms)")

print("\n== closed forms at the half-integer point ==")
print("S(1/2) =", mp.nstr(sf.eval_s(Fraction(1, 2), 128, table).value, 30))
print("T(1/2) =", mp.nstr(sf.eval_t(Fraction(1, 2), 128, table).value, 30))
print("       = (log 2)^2 + 2 gamma log 2 =",
      mp.nstr(mp.log(2) ** 2 + 2 * mp.euler * mp.log(2), 30))

print("\n== difference equations hold to the certified precision ==")
x = Fraction(27, 10)
lx = mp.log(27) - mp.log(10)
step_s = sf.eval_s(x + 1, 128, table).value - sf.eval_s(x, 128, table).value
step_t = sf.eval_t(x + 1, 128, table).value - sf.eval_t(x, 128, table).value
print(f"S(x+1)-S(x)+log(x)^2   = {mp.nstr(step_s + lx**2, 5)}")
print(f"T(x+1)-T(x)-log(x)/x   = {mp.nstr(step_t - lx / mp.mpf(2.7), 5)}")

print("\n== reflection sum: only even-index coefficients needed ==")
r = sf.s_reflect_sum(Fraction(1, 7), 128, table)
two = sf.eval_s(Fraction(1, 7), 128, table).value + sf.eval_s(Fraction(6, 7), 128, table).value
print(f"S(1/7)+S(6/7) via reflection kernel: {mp.nstr(r.value, 30)}  ({r.terms_used} terms)")
print(f"                via two full calls:  {mp.nstr(two, 30)}")

print("\n== the summand-count contract ==")
for n in (32, 64, 128):
    res = sf.eval_s(Fraction(499, 1000), n, table)
    print(f"bits={n:3d}: S used {res.terms_used:3d} terms (contract: <= n+2 = {n + 2})")
