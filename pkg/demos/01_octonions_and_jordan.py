"""A tour of the algebra underneath: octonions, the 27-dimensional Jordan
algebra and the 56-dimensional Freudenthal space."""

import numpy as np

from spinor_factor import algebra as A
from spinor_factor import freudenthal as F
from spinor_factor import jordan as J

rng = np.random.default_rng(0)
e = np.eye(8)

print("e1 e2 =", A.omul(e[1], e[2]))
assoc = A.omul(A.omul(e[1], e[2]), e[4]) - A.omul(e[1], A.omul(e[2], e[4]))
print("(e1 e2) e4 - e1 (e2 e4) has norm", A.norm(assoc), "so the product is not associative")

a, b = rng.standard_normal((2, 8))
print("|ab| - |a||b| =", A.norm(A.omul(a, b)) - A.norm(a) * A.norm(b))

# rank one in J means X x X = 0; the idempotents E_k are the simplest examples
for k in (1, 2, 3):
    print(f"E{k} rank one:", J.is_rank_one(J.E(k))[0])
print("identity rank one:", J.is_rank_one(J.IDENTITY_ELEMENT)[0])

# the unit point of P^C and a random point of its orbit satisfy all seventeen identities
P = F.rank_one_point(0.3 * rng.standard_normal(27))
print("identities at 1dot:", F.rank1_residuals(F.ONE_DOT).max())
print("identities at a rank-one point:", F.rank1_residuals(P).max())
print("identity (2) at (E, 0, 0, 0):", F.rank1_residuals(F.point(J.IDENTITY_ELEMENT))[1])
