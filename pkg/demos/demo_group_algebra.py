#!/usr/bin/env python3
"""Group algebra arithmetic, the word-length derivation, and holomorphic
inversion via the geometric series, checked against a matrix oracle."""

import numpy as np

from ncindex import (GA, GroupSpec, delta_word_length, ga_mul,
                     neumann_inverse, trace_e)

print("=== exact arithmetic in C[Z/5] ===")
z5 = GroupSpec.cyclic(5)
rng = np.random.default_rng(0)
a, b, c = (GA.random(z5, rng) for _ in range(3))
print("associativity residual :",
      ((a * b) * c - a * (b * c)).max_abs())
print("trace cyclicity        :", abs(trace_e(ga_mul(a, b) - ga_mul(b, a))))
print("involution (ab)* = b*a*:",
      ((a * b).star() - b.star() * a.star()).max_abs())

print()
print("=== word-length derivation on Z ===")
z = GroupSpec.lattice(1)
g = GA.delta(z, (1,))
rep = delta_word_length(g, 6)
print("entries of [D, g] on the ball are length differences:")
for h in ((-2,), (-1,), (0,), (1,)):
    gh = z.mul((1,), h)
    print(f"  ({h[0]:+d} -> {gh[0]:+d}):", rep.entry(gh, h).real)
print("operator norm lower bound:", rep.opnorm_lower(),
      "(word length of the generator: 1)")

print()
print("=== derivation norms for the free group of rank 2 ===")
f2 = GroupSpec.free(2, radius=4)
for gen in f2.generators():
    r = delta_word_length(GA.delta(f2, gen), 4)
    print(f"  generator {gen}: |delta| on the ball =", r.opnorm_lower())

print()
print("=== Neumann inversion in C[Z/3] vs the regular representation ===")
z3 = GroupSpec.cyclic(3)
x = GA.one(z3) - 0.5 * GA.delta(z3, 1)
inv = neumann_inverse(x, tol=1e-13)
_, mx = x.regular_rep(1)
_, mi = inv.regular_rep(1)
print("series inverse vs matrix inverse:",
      np.max(np.abs(mi - np.linalg.inv(mx))))
report = []
neumann_inverse(x, tol=1e-13, seminorm_report=report)
print("seminorm growth obeys the n|1-x|^{n-1}|delta(1-x)| bound:",
      all(e["delta_norm"] <= e["bound"] + 1e-10 for e in report))
