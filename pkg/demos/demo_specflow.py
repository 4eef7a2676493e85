#!/usr/bin/env python3
"""Spectral flow on mode windows: shifted-Dirac translation paths, the
loop-compression projection field, and agreement of spectral flow with
the relative index of spectral projections."""

import numpy as np

from ncindex import (ChiTriple, SelfAdjointPath, pu_projection,
                     spectral_flow, verify_oddind)
from ncindex.specflow import pu_idempotence_residual, truncated_dirac

print("=== translation path of the half-shifted window Dirac ===")
fc = 32
n = 2 * fc + 1
D = truncated_dirac(fc) + 0.5 * np.eye(n)
path = SelfAdjointPath.from_callable(lambda t: D + t * np.eye(n),
                                     delta_c=0.2)
print("spectral flow forward :", spectral_flow(path))
print("spectral flow reversed:", spectral_flow(path.reversed()))

print()
print("=== loop-compression projection field ===")
rng = np.random.default_rng(2)
U = np.linalg.qr(rng.standard_normal((3, 3))
                 + 1j * rng.standard_normal((3, 3)))[0]
chi = ChiTriple(257)
field = pu_projection(U, chi)
print("cutoff identity residual:", chi.residual())
print("idempotence residual    :", pu_idempotence_residual(field))
print("endpoint value is diag(0, 1):",
      np.max(np.abs(field[0] - np.diag([0, 0, 0, 1, 1, 1]))) == 0.0)

print()
print("=== odd pairing: spectral flow vs relative index ===")
print(f"{'m':>3} {'spfl':>5} {'rel (adjusted)':>15} {'match':>6}")
for m in (1, 2, -1, -2):
    rep = verify_oddind(64, m)
    print(f"{m:>3} {rep['spfl']:>5} {rep['rel_index_adjusted']:>15} "
          f"{str(rep['match']):>6}")
