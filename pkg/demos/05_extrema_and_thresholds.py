"""
Extremal points and squeezing thresholds
========================================

A grid over the probability simplex followed by golden-section refinement
finds the deepest squeezing; the threshold search finds the most
tripartite-entangled state that is still squeezed in all three modes.
"""

import math

from trisqueeze import Family, SamplerConfig
from trisqueeze.scan import find_extremum, squeeze_threshold

r = find_extremum(Family.III_1A, "lambda_jk", {"000": 0.0})
p = (2 - math.sqrt(2)) / 4
print(f"III_1A min lambda_jk = {r.value:.9f}  analytic {2 * (1 + 2 * p - 2 * math.sqrt(p * (1 - p))):.9f}")
print("  at", {k: round(v, 6) for k, v in r.probabilities().items()}, " N_jk =", round(r.fields()["N_jk"], 6))

r = find_extremum(Family.III_3, "lambda_ijk")
print(f"III_3 min lambda_ijk = {r.value:.6f} with N_ijk = {r.fields()['N_ijk']:.4f}")

r = find_extremum(Family.III_3, "N_ijk", maximize=True)
f = r.fields()
print(f"III_3 max N_ijk = {r.value:.6f}; pair negativities {f['N_ij']:.4f} {f['N_ik']:.4f} {f['N_jk']:.4f}")

cfg = SamplerConfig(count=20_000)
for family in (Family.III_1A, Family.III_1B, Family.III_2, Family.III_3):
    t = squeeze_threshold(family, cfg)
    print(f"{family.value:7s} three-mode squeezing up to N_ijk = {t.value:.4f}")
