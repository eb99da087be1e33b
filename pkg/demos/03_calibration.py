"""How the generator conventions are pinned down.

Each of alpha, beta, gamma, delta is built from a template with five binary
choices.  Only one of the 32 combinations keeps every operator inside its
subgroup and also performs the zeroing moves the reductions rely on.
"""

from spinor_factor import generators as G

for fam in G.CALIBRATED_FAMILIES:
    profile = G.calibrate(fam)
    report = G.calibration_report(fam)
    print(f"{fam:5s} -> {profile.bits()}  ({len(report['survivors'])} of 32 profiles survive)")

try:
    G.calibrate("alpha", vector_sign=-1)
except G.NoProfileSatisfies:
    print("flipping the sign of the alpha template leaves no admissible profile")
