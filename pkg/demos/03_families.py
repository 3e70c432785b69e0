"""
State families and closed forms
===============================

Each family is a handful of kets with nonnegative amplitudes. Sampling is
seeded; for real amplitudes the variances also have closed forms.
"""

import numpy as np

from trisqueeze import Family, FamilySpec, SamplerConfig, build_state, lambda_closed_form, pure_density, squeeze_report
from trisqueeze.classify import classify_state
from trisqueeze.states import sample_family

cfg = SamplerConfig(seed=7, count=3)
for family in (Family.III_0, Family.III_1A, Family.III_1B, Family.III_2, Family.III_3):
    print(f"\n{family.value}")
    for spec in sample_family(family, cfg):
        rho = pure_density(build_state(spec))
        closed = lambda_closed_form(spec)
        numeric = squeeze_report(rho)
        gap = max(abs(a - b) for a, b in zip(closed.as_row().values(), numeric.as_row().values()))
        cls = classify_state(rho)
        probs = ", ".join(f"{k}:{p:.3f}" for k, p in zip(spec.kets, spec.probabilities))
        print(f"  {probs:40s} {cls.subtype.value}  pivot={cls.pivot}  closed-vs-numeric {gap:.1e}")

# Any pivot can be chosen; the kets are relabelled cyclically.
spec = FamilySpec.from_probabilities(Family.III_1A, [0.5, 0.3, 0.2], pivot="k")
print("\nIII_1A with pivot k uses kets", spec.kets)
print("and serializes as", spec.dumps())
assert FamilySpec.from_json(spec.dumps()) == spec
print("round trip ok;", np.round(np.abs(build_state(spec)) ** 2, 3))
