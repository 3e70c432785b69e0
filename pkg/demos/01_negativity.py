"""
Negativities of GHZ and W states
================================

Partial transposition, the Jacobi eigensolver and the seven negativity
columns, checked against LAPACK on the way.
"""

import numpy as np

from trisqueeze import eigen_hermitian, ghz_state, partial_transpose, pure_density, tripartite_negativity, w_state

# A density matrix is the outer product of a state vector with itself.
ghz = pure_density(ghz_state())
w = pure_density(w_state())

# Transposing mode i alone leaves a matrix with one negative eigenvalue.
pt = partial_transpose(ghz, "i")
print("GHZ, spectrum after transposing mode i:", np.round(eigen_hermitian(pt).eigenvalues, 12))
print("same from LAPACK:                       ", np.round(np.linalg.eigvalsh(pt), 12))

# All pair, one-vs-two and tripartite negativities at once.
for name, rho in (("GHZ", ghz), ("W", w)):
    report = tripartite_negativity(rho)
    print(f"\n{name}")
    for column, value in report.as_row().items():
        print(f"  {column:7s} {value:.6f}")

# The W value equals 2*sqrt(2)/3 and each pair carries (sqrt(5) - 1)/3.
print("\n2*sqrt(2)/3 =", 2 * np.sqrt(2) / 3, " (sqrt(5)-1)/3 =", (np.sqrt(5) - 1) / 3)
