"""Two-mode, one-vs-two and tripartite negativities of three-qubit states."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .linalg import (
    ContractError,
    eigvalsh,
    hermitian_part,
    mode_index,
    mode_name,
    partial_trace,
    partial_transpose,
)

NEGATIVE_EIGENVALUE_TOL = 1e-10
TRACE_TOL = 1e-8
PSD_TOL = 1e-8

PAIRS = ((0, 1), (0, 2), (1, 2))
PAIR_COLUMNS = ("N_ij", "N_ik", "N_jk")
BIPARTITION_COLUMNS = ("N_i-jk", "N_j-ik", "N_k-ij")
COLUMNS = PAIR_COLUMNS + BIPARTITION_COLUMNS + ("N_ijk",)


def validate_density(rho, check_spectrum: bool = True) -> np.ndarray:
    """Check a (stack of) 8x8 density matrices and return the Hermitian part."""
    rho = hermitian_part(rho)
    if rho.shape[-1] != 8:
        raise ContractError("expected an 8x8 three-qubit density matrix")
    tr = np.trace(rho, axis1=-2, axis2=-1).real
    if np.any(np.abs(tr - 1.0) > TRACE_TOL):
        raise ContractError(f"density matrix trace {tr!r} differs from 1")
    if check_spectrum:
        lowest = eigvalsh(rho)[..., 0]
        if np.any(lowest < -PSD_TOL):
            raise ContractError(f"density matrix has eigenvalue {np.min(lowest):.3g} < 0")
    return rho


def negativity_from_eigenvalues(eigenvalues) -> np.ndarray | float:
    """``-2 * sum`` of eigenvalues below ``-NEGATIVE_EIGENVALUE_TOL`` (exactly 0 otherwise)."""
    w = np.asarray(eigenvalues)
    negative = np.where(w < -NEGATIVE_EIGENVALUE_TOL, w, 0.0).sum(axis=-1)
    out = 0.0 - 2.0 * negative
    return float(out) if np.ndim(out) == 0 else out


def _pair_pt(rho, a: int, b: int):
    keep = sorted((a, b))
    reduced = partial_trace(rho, keep)
    return partial_transpose(reduced, a, spanned=keep)


def negativity_pair(rho3, a, b, check: bool = True):
    """Negativity of the two-mode state left after tracing out the third mode."""
    a, b = mode_index(a), mode_index(b)
    if a == b:
        raise ContractError("pair negativity needs two distinct modes")
    rho3 = validate_density(rho3, check_spectrum=check)
    return negativity_from_eigenvalues(eigvalsh(_pair_pt(rho3, a, b)))


def negativity_bipartition(rho3, single, check: bool = True):
    """Negativity of the cut ``single | other two`` on the full 8x8 matrix."""
    rho3 = validate_density(rho3, check_spectrum=check)
    return negativity_from_eigenvalues(eigvalsh(partial_transpose(rho3, single)))


def negativity_table(rho3, check: bool = True) -> dict[str, np.ndarray]:
    """All seven negativities for one matrix or a stack, keyed by CSV column."""
    rho3 = validate_density(rho3, check_spectrum=check)
    pair_pts = np.stack([_pair_pt(rho3, a, b) for a, b in PAIRS], axis=-3)
    cut_pts = np.stack([partial_transpose(rho3, m) for m in range(3)], axis=-3)
    pair_n = negativity_from_eigenvalues(eigvalsh(pair_pts))
    cut_n = negativity_from_eigenvalues(eigvalsh(cut_pts))
    pair_n = np.asarray(pair_n)
    cut_n = np.asarray(cut_n)
    out = {name: pair_n[..., n] for n, name in enumerate(PAIR_COLUMNS)}
    out.update({name: cut_n[..., n] for n, name in enumerate(BIPARTITION_COLUMNS)})
    out["N_ijk"] = np.cbrt(np.prod(cut_n, axis=-1))
    return out


@dataclass(frozen=True)
class EntanglementReport:
    n_ij: float
    n_ik: float
    n_jk: float
    n_i_jk: float
    n_j_ik: float
    n_k_ij: float
    n_ijk: float

    def pair(self, a, b) -> float:
        a, b = sorted((mode_index(a), mode_index(b)))
        return getattr(self, f"n_{mode_name(a)}{mode_name(b)}")

    def as_row(self) -> dict[str, float]:
        return dict(zip(COLUMNS, asdict(self).values()))

    @classmethod
    def from_row(cls, row) -> "EntanglementReport":
        return cls(*(float(row[c]) for c in COLUMNS))


def tripartite_negativity(rho3, check: bool = True) -> EntanglementReport:
    table = negativity_table(rho3, check=check)
    if np.ndim(table["N_ijk"]) != 0:
        raise ContractError("tripartite_negativity takes a single density matrix")
    return EntanglementReport.from_row(table)
