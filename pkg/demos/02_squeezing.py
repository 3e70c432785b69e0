"""
Principal squeeze variances
===========================

Two routes to the same number: the closed moment formula, and a brute-force
minimization of a quadrature variance over the rotation phase in a Fock
space that keeps the true bosonic commutator.
"""

import numpy as np

from trisqueeze import (
    AmplitudeMode,
    Family,
    SamplerConfig,
    ghz_state,
    pure_density,
    quadrature_variance_scan,
    squeeze_report,
)
from trisqueeze.squeezing import uncertainty_product
from trisqueeze.states import basis_state, sample_amplitudes, states_from_amplitudes

# Vacuum sits on the standard quantum limit: 2 for a pair, 3 for all modes.
print("vacuum:", squeeze_report(pure_density(basis_state("000"))).as_row())
print("GHZ:   ", squeeze_report(pure_density(ghz_state())).as_row())

# A random complex state, compared mode set by mode set.
cfg = SamplerConfig(seed=1, count=1, amplitude_mode=AmplitudeMode.COMPLEX)
psi = states_from_amplitudes(Family.GENERAL, sample_amplitudes(Family.GENERAL, cfg))[0]
rho = pure_density(psi)
report = squeeze_report(rho)
for column, modes in (("lambda_ij", "ij"), ("lambda_ik", "ik"), ("lambda_jk", "jk"), ("lambda_ijk", "ijk")):
    scan = quadrature_variance_scan(rho, modes)
    print(f"{column:10s} moments {getattr(report, column):.12f}  phase scan {scan:.12f}")

# Heisenberg: Var(X) Var(Y) >= 4 for a pair and >= 9 for three modes.
print("uncertainty products:", uncertainty_product(rho, "ij"), uncertainty_product(rho, "ijk"))
