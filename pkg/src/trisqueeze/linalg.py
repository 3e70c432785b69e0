"""Dense complex linear algebra on the three-qubit space.

Basis convention: ``|abc>`` sits at index ``4a + 2b + c``, so mode ``i`` is the
most significant bit. Every routine accepts a single matrix or a stack of them
with shape ``(..., d, d)``.
"""

from __future__ import annotations

from functools import reduce
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np
from numba import njit

MODES = ("i", "j", "k")

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-14  # off-diagonal Frobenius norm, relative to max(1, ||M||)
MAX_SWEEPS = 60


class ContractError(ValueError):
    """Raised when an input violates the documented preconditions."""


def mode_index(mode) -> int:
    """Map ``'i'``/``'j'``/``'k'`` (or 0/1/2) to a bit position."""
    if isinstance(mode, str) and mode in MODES:
        return MODES.index(mode)
    if isinstance(mode, (int, np.integer)) and not isinstance(mode, bool) and 0 <= mode < 3:
        return int(mode)
    raise ContractError(f"unknown mode {mode!r}; expected one of {MODES}")


def mode_name(mode) -> str:
    return MODES[mode_index(mode)]


def _n_qubits(dim: int) -> int:
    n = {2: 1, 4: 2, 8: 3}.get(dim)
    if n is None:
        raise ContractError(f"matrix dimension {dim} is not 2, 4 or 8")
    return n


def _as_square(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ContractError(f"expected square matrix, got shape {m.shape}")
    if m.shape[-1] == 0:
        raise ContractError("empty matrix")
    return m


def tensor(*factors) -> np.ndarray:
    """Kronecker product of the factors, left factor most significant."""
    if not factors:
        raise ContractError("tensor() needs at least one factor")
    return reduce(np.kron, [np.asarray(f) for f in factors])


# ---------------------------------------------------------------- eigensolver


class EigenResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None


def hermitian_part(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate Hermiticity within ``tol`` and return ``(m + m^H) / 2``."""
    m = _as_square(m).astype(complex)
    mh = np.conj(np.swapaxes(m, -1, -2))
    dev = np.max(np.abs(m - mh))
    if not dev < tol:
        raise ContractError(f"matrix is not Hermitian (max |M - M^H| = {dev:.3g})")
    return 0.5 * (m + mh)


@njit(cache=True, nogil=True)
def _jacobi_inplace(a, v, want_vectors):
    # Cyclic sweeps over (p, q); each rotation is a phase on column q followed
    # by a real Givens rotation, so a[p, q] becomes exactly zero.
    d = a.shape[0]
    total = 0.0
    for r in range(d):
        for c in range(d):
            total += a[r, c].real ** 2 + a[r, c].imag ** 2
    tol = JACOBI_TOL * max(1.0, np.sqrt(total))
    for _ in range(MAX_SWEEPS):
        off = 0.0
        for r in range(d):
            for c in range(d):
                if r != c:
                    off += a[r, c].real ** 2 + a[r, c].imag ** 2
        if np.sqrt(off) < tol:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                ph = np.conj(apq) / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g_qp = -s * ph
                g_qq = c * ph
                for x in range(d):
                    xp = a[x, p]
                    xq = a[x, q]
                    a[x, p] = xp * c + xq * g_qp
                    a[x, q] = xp * s + xq * g_qq
                for x in range(d):
                    px = a[p, x]
                    qx = a[q, x]
                    a[p, x] = c * px + np.conj(g_qp) * qx
                    a[q, x] = s * px + np.conj(g_qq) * qx
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    for x in range(d):
                        xp = v[x, p]
                        xq = v[x, q]
                        v[x, p] = xp * c + xq * g_qp
                        v[x, q] = xp * s + xq * g_qq


@njit(cache=True, nogil=True)
def _jacobi_stack(a, want_vectors):
    n, d = a.shape[0], a.shape[1]
    w = np.empty((n, d))
    v = np.zeros((n, d, d), dtype=np.complex128)
    for b in range(n):
        for x in range(d):
            v[b, x, x] = 1.0
        _jacobi_inplace(a[b], v[b], want_vectors)
        for x in range(d):
            w[b, x] = a[b, x, x].real
    return w, v


def eigen_hermitian(m, vectors: bool = False) -> EigenResult:
    """Eigen-decompose a Hermitian matrix (or stack) with cyclic Jacobi sweeps.

    Eigenvalues come back ascending. Inputs within ``HERMITIAN_TOL`` of
    Hermitian are symmetrized first; anything further off raises
    :class:`ContractError`. Columns of ``eigenvectors`` are the eigenvectors.
    """
    m = hermitian_part(m)
    shape = m.shape
    d = shape[-1]
    a = np.ascontiguousarray(m.reshape(-1, d, d))
    w, v = _jacobi_stack(a, vectors)
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1).reshape(shape[:-1])
    if not vectors:
        return EigenResult(w)
    v = np.take_along_axis(v, order[:, None, :], axis=-1).reshape(shape)
    return EigenResult(w, v)


def eigvalsh(m) -> np.ndarray:
    return eigen_hermitian(m).eigenvalues


# ------------------------------------------------------ subsystem operations


def _spanned(dim: int, spanned: Sequence | None) -> list[int]:
    n = _n_qubits(dim)
    if spanned is None:
        return list(range(n))
    idx = [mode_index(s) for s in spanned]
    if len(idx) != n or len(set(idx)) != n or idx != sorted(idx):
        raise ContractError(f"spanned modes {spanned!r} do not describe a {dim}x{dim} matrix")
    return idx


def partial_transpose(m, mode, spanned: Sequence | None = None) -> np.ndarray:
    """Transpose the row/column indices belonging to ``mode`` only.

    ``spanned`` lists the modes the matrix acts on (ascending); it defaults to
    the first ``log2(d)`` modes, i.e. ``(i, j)`` for a 4x4 matrix.
    """
    m = _as_square(m)
    d = m.shape[-1]
    if d not in (4, 8):
        raise ContractError("partial transpose needs a 4x4 or 8x8 matrix")
    modes = _spanned(d, spanned)
    target = mode_index(mode)
    if target not in modes:
        raise ContractError(f"mode {mode_name(target)} is not spanned by this matrix")
    n = len(modes)
    pos = modes.index(target)
    lead = m.shape[:-2]
    t = m.reshape(lead + (2,) * (2 * n))
    off = len(lead)
    axes = list(range(t.ndim))
    axes[off + pos], axes[off + n + pos] = axes[off + n + pos], axes[off + pos]
    return t.transpose(axes).reshape(m.shape)


def partial_trace(m, keep) -> np.ndarray:
    """Reduce a three-qubit matrix to the modes in ``keep`` (1 or 2 of them)."""
    m = _as_square(m)
    if m.shape[-1] != 8:
        raise ContractError("partial trace expects an 8x8 matrix")
    kept = sorted({mode_index(k) for k in keep})
    if len(kept) not in (1, 2):
        raise ContractError("keep must name one or two modes")
    lead = m.shape[:-2]
    t = m.reshape(lead + (2,) * 6)
    row = ["a", "b", "c"]
    col = ["d", "e", "f"]
    for r in range(3):
        if r not in kept:
            col[r] = row[r]
    out = "".join(row[r] for r in kept) + "".join(col[r] for r in kept)
    d = 2 ** len(kept)
    return np.einsum("..." + "".join(row) + "".join(col) + "->..." + out, t).reshape(lead + (d, d))


# ----------------------------------------------------------- mode operators

_LOWER_1 = np.array([[0.0, 1.0], [0.0, 0.0]])


def lowering_operator(mode) -> np.ndarray:
    """Truncated annihilation operator of ``mode`` on the 8-dim space."""
    factors = [np.eye(2)] * 3
    factors[mode_index(mode)] = _LOWER_1
    return tensor(*factors)


def raising_operator(mode) -> np.ndarray:
    return lowering_operator(mode).T.copy()


def apply_mode_operator(state, mode, op: str) -> np.ndarray:
    """Apply the truncated lowering (``'lower'``) or raising (``'raise'``) operator."""
    state = np.asarray(state)
    if state.shape[-1] != 8:
        raise ContractError("state vectors have 8 amplitudes")
    if op == "lower":
        mat = lowering_operator(mode)
    elif op == "raise":
        mat = raising_operator(mode)
    else:
        raise ContractError(f"op must be 'lower' or 'raise', got {op!r}")
    return state @ mat.T
