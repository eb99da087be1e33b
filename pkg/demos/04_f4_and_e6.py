"""Factor random F4 and E6 elements into Spin1 . Spin2 . Spin1."""

from spinor_factor import decompose as D
from spinor_factor.sampling import SampleConfig, sample_group_element

for group in ("f4", "e6"):
    alpha = sample_group_element(SampleConfig(group, n=20, seed=42))
    seq = D.decompose(alpha, group)
    rep = D.verify_decomposition(alpha, seq)
    print(f"{group.upper()}: {' . '.join(seq.labels)}")
    print(f"  case path {seq.trace.path}")
    for f in seq.factors:
        n = "-" if f.word is None else len(f.word)
        print(f"  {f.label:10s} word length {n}")
    print(f"  reconstruction {rep['reconstruction']:.2e}, worst membership {rep['membership_max']:.2e}")
