#!/usr/bin/env python3
"""The arbitrary-length transform engine and its error model.

Character sums need transforms of length q-1 or (q-1)/2, which routinely
contain a large prime factor; smooth parts go through mixed-radix passes
and large prime parts through the chirp (Bluestein) convolution.  Round
trips are audited against the model Delta(2+Delta)||x||.
"""
import numpy as np

from ekscan import accuracy, transform as tr

rng = np.random.default_rng(0)

print("== planning ==")
for n in (1, 4096, 15, 1531, 2 * 5 * 9644779):
    p = tr.plan(n)
    print(f"N={n:>10}: factors={p.factors[:6]}{'...' if len(p.factors) > 6 else ''} "
          f"strategy={p.strategy}")

print("\n== the two paths agree where both apply ==")
x = rng.standard_normal(15) + 1j * rng.standard_normal(15)
a = tr.execute(tr.plan(15, force="radix"), x)
b = tr.execute(tr.plan(15, force="chirp"), x)
print(f"N=15, max |radix - chirp| = {np.max(np.abs(a - b)):.3e}")

print("\n== odd-character (twiddled half) transform ==")
q = 11
n = (q - 1) // 2
v = rng.standard_normal(n)
y = tr.twiddled_half_transform(v, q)
brute = [sum(v[k] * np.exp(2j * np.pi * (2 * m + 1) * k / (q - 1)) for k in range(n))
         for m in range(n)]
print(f"q=11, max |fft - brute| = {np.max(np.abs(y - np.array(brute))):.3e}")

print("\n== round-trip audit against the error model ==")
for n in (1531, 49999):
    seq = rng.standard_normal(n) * np.exp(rng.uniform(0, 5, n))
    eps = accuracy.audit_eps()
    d = accuracy.delta(n, eps)
    e2, einf = accuracy.roundtrip_audit(seq)
    bound = d * (2 + d) * np.linalg.norm(seq)
    print(f"N={n:6d}: E2 = {e2:.3e}  <=  Delta(2+Delta)||x||_2 = {bound:.3e}")

print("\n== what-if: the model at 64-bit-mantissa arithmetic ==")
q = 50040955631
d = accuracy.delta((q - 1) // 2, 2.0**-64)
print(f"Delta((q-1)/2, 2^-64) for q = {q}: {d:.4e}  (< 1.92e-19)")
