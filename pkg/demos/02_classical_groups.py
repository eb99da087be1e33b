"""The three-factor split A = A1 A2 A1' for SO(3), SU(3) and Sp(3).

A1 and A1' fix e1, A2 fixes e2.  This is the model for the exceptional
cases: a few plane rotations push the first column back to e1.
"""

import numpy as np

from spinor_factor import classical as C

rng = np.random.default_rng(1)
for group, ring in C.GROUP_RING.items():
    A = C.sample(group, rng)
    triple = C.decompose_classical(A, ring)
    rep = C.verify_factors(A, triple)
    print(f"{group}: reconstruction {rep['reconstruction']:.2e}, "
          f"A1 e1 = e1 to {rep['A1_fixes_e1']:.1e}, A2 e2 = e2 to {rep['A2_fixes_e2']:.1e}")

A = np.diag([-1.0, 1.0, -1.0])
t = C.decompose_classical(A, "real")
print("diag(-1, 1, -1) gives A1' =\n", np.round(t.A1p, 12))
