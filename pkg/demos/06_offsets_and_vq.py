#!/usr/bin/env python3
"""The greedy prime-offset sequence and the v(q) candidate score.

A prime q with many prime neighbours b*q + 1 (b from the greedy admissible
offset sequence) tends to have a small, occasionally negative,
Euler-Kronecker constant; v(q) sums 1/b over the offsets that hit a prime
and is cheap for any q (only primality tests).
"""
from ekscan import offsets

seq = offsets.default_offsets()
print("greedy offsets:", seq.b[:12], "...")
print(f"count = {seq.count}, largest = {seq.b[-1]}")

m_c = offsets.m_of(seq.tail())
print(f"m(C) = {float(m_c):.10f}  (exact fraction comparison: m(C) > 2 is {m_c > 2})")
print("the 2089-element prefix is the first whose offset-harmonic sum clears 2\n")

print("v(q) for a few moduli (five bands classify scan scatter plots):")
for q in (13, 2053, 9109334831, 50040955631):
    vs = offsets.v_score(q, seq)
    print(f"  v({q}) = {vs.v:.6f}  band {offsets.v_band(vs.v)}  "
          f"({len(vs.contributing)} contributing offsets, {vs.primality})")

print("\nq = 50040955631 scores v > 1, the rarest band: exactly the profile")
print("that points at small or negative Euler-Kronecker constants.")
