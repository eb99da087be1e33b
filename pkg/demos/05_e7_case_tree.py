"""Five-factor E7 decompositions and the branches they take.

Generic samples always follow the same branch, so the second half uses
quarter-turn words, which produce the exact zeros that send the reduction
down the rarer branches.
"""

from collections import Counter

import numpy as np

from spinor_factor import decompose as D
from spinor_factor import generators as G
from spinor_factor.generators import GeneratorSpec
from spinor_factor.sampling import SampleConfig, sample_group_element

paths = Counter()
for seed in range(20):
    alpha = sample_group_element(SampleConfig("e7", 20, seed))
    paths[D.decompose_e7(alpha).trace.path.split(" > E6[")[0]] += 1
print("generic samples:", dict(paths))

rng = np.random.default_rng(3)
families = ("alpha", "beta", "gamma", "delta")
paths = Counter()
for _ in range(300):
    word = [GeneratorSpec(str(rng.choice(families)), int(rng.integers(1, 4)),
                          int(rng.integers(1, 4)) * np.pi / 4 * np.eye(8)[rng.integers(8)])
            for _ in range(int(rng.integers(1, 6)))]
    alpha = G.word_operator(word, "PC")
    seq = D.decompose_e7(alpha)
    assert D.verify_decomposition(alpha, seq)["reconstruction"] < 1e-6
    paths[seq.trace.path.split(" > E6[")[0]] += 1
print("quarter-turn words:")
for path, count in paths.most_common():
    print(f"  {count:4d}  {path}")
