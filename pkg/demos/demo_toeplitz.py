#!/usr/bin/env python3
"""Toeplitz indices of circle actions: the compression index, the
derivation-trace formula and the determinant winding oracle agree across
a sweep of symbols, including the rational rotation algebra."""

from ncindex import (CircleSystem, RotationSystem, assemble_toeplitz,
                     dynsys_formula, tau_index, winding_index)

print("=== translation action on C(S^1), F_c = 64 ===")
system = CircleSystem(grid_n=256)
print(f"{'m':>3} {'tau_index':>10} {'formula':>10} {'winding':>10}")
for m in range(-3, 4):
    u = system.exponential(m)
    tp = assemble_toeplitz(system, u, 64)
    print(f"{m:>3} {tau_index(tp):>10.4f} "
          f"{dynsys_formula(system, u).real:>10.4f} "
          f"{winding_index(system, u):>10.4f}")

print()
print("=== rational rotation algebras, shift generator ===")
print(f"{'p/q':>5} {'tau_index':>10} {'formula':>10}")
for p, q in ((1, 2), (1, 3), (2, 5)):
    rs = RotationSystem(p, q)
    tp = assemble_toeplitz(rs, rs.v(), 64)
    print(f"{p}/{q:>3} {tau_index(tp):>10.4f} "
          f"{dynsys_formula(rs, rs.v()).real:>10.4f}")

print()
print("=== stability under cutoff doubling ===")
u = system.exponential(2)
for fc in (32, 64, 128):
    print(f"  F_c = {fc:3d}: tau_index =",
          tau_index(assemble_toeplitz(system, u, fc)))
