"""Two- and three-mode principal squeeze variances.

Three routes to the same numbers:

* ``compute_moments`` + ``principal_variance`` -- first and second moments of
  the truncated mode operators, combined into the minimum over a common
  rotation phase of the collective quadrature variance (standard quantum
  limit 2 for a pair of modes, 3 for all three).
* ``closed_form_lambdas`` -- per-family expressions in the ket probabilities,
  valid for nonnegative real amplitudes.
* ``quadrature_variance_scan`` -- brute-force phase minimization of the
  quadrature variance, evaluated on genuine bosonic operators (occupations
  0..2 per mode) rather than on the moment table.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .entanglement import validate_density
from .linalg import ContractError, lowering_operator, mode_index, mode_name
from .optimize import golden_section
from .states import Family, FamilySpec

COLUMNS = ("lambda_ij", "lambda_ik", "lambda_jk", "lambda_ijk")
FIELD_MODES = {"lambda_ij": (0, 1), "lambda_ik": (0, 2), "lambda_jk": (1, 2), "lambda_ijk": (0, 1, 2)}


class UnsupportedFamilyError(ContractError):
    pass


class UnsupportedRegimeError(ContractError):
    pass


def standard_quantum_limit(n_modes: int) -> float:
    return float(n_modes)


# ------------------------------------------------------------------ moments

_LOWER = np.stack([lowering_operator(m) for m in range(3)])


@dataclass(frozen=True)
class MomentTable:
    """Raw moments; arrays carry a leading batch shape when built from a stack.

    ``cross_nd[..., m, n] = <a_m^dag a_n>`` and ``cross_aa[..., m, n] = <a_m a_n>``
    are stored as full 3x3 matrices; their diagonals are ``number`` and
    ``square``.
    """

    mean_a: np.ndarray
    number: np.ndarray
    cross_nd: np.ndarray
    square: np.ndarray
    cross_aa: np.ndarray

    def delta_nd(self, m: int, n: int):
        """Centralized ``<da_m^dag da_n>``."""
        return self.cross_nd[..., m, n] - np.conj(self.mean_a[..., m]) * self.mean_a[..., n]

    def delta_aa(self, m: int, n: int):
        """Centralized ``<da_m da_n>``."""
        return self.cross_aa[..., m, n] - self.mean_a[..., m] * self.mean_a[..., n]


def _expect(rho, op):
    return np.einsum("...ij,ji->...", rho, op)


def compute_moments(rho3, check: bool = True) -> MomentTable:
    rho3 = validate_density(rho3, check_spectrum=check)
    lead = rho3.shape[:-2]
    mean = np.stack([_expect(rho3, _LOWER[m]) for m in range(3)], axis=-1)
    nd = np.empty(lead + (3, 3), dtype=complex)
    aa = np.empty(lead + (3, 3), dtype=complex)
    for m in range(3):
        for n in range(3):
            nd[..., m, n] = _expect(rho3, _LOWER[m].T @ _LOWER[n])
            aa[..., m, n] = _expect(rho3, _LOWER[m] @ _LOWER[n])
    square = np.stack([aa[..., m, m] for m in range(3)], axis=-1)
    # a^2 annihilates every ket with occupations <= 1
    if np.any(square != 0):
        raise AssertionError("truncated a_m^2 has a nonzero expectation value")
    return MomentTable(mean, nd[..., range(3), range(3)].real, nd, square, aa)


def principal_variance(moments: MomentTable, modes) -> np.ndarray | float:
    """Minimum over a common phase of the quadrature variance of ``modes``."""
    modes = [mode_index(m) for m in modes]
    if len(set(modes)) != len(modes) or len(modes) not in (2, 3):
        raise ContractError("need two or three distinct modes")
    normal = sum(moments.delta_nd(m, m).real for m in modes)
    cross = sum(moments.delta_nd(m, n).real for m, n in combinations(modes, 2))
    anomalous = sum(moments.delta_aa(m, m) for m in modes)
    anomalous = anomalous + 2 * sum(moments.delta_aa(m, n) for m, n in combinations(modes, 2))
    lam = len(modes) + 2 * normal + 4 * cross - 2 * np.abs(anomalous)
    return float(lam) if np.ndim(lam) == 0 else lam


def lambda_two_mode(moments: MomentTable, a, b):
    if mode_index(a) == mode_index(b):
        raise ContractError("two-mode variance needs two distinct modes")
    return principal_variance(moments, (a, b))


def lambda_three_mode(moments: MomentTable):
    return principal_variance(moments, (0, 1, 2))


@dataclass(frozen=True)
class SqueezeReport:
    lambda_ij: float
    lambda_ik: float
    lambda_jk: float
    lambda_ijk: float
    moments: MomentTable | None = None

    def pair(self, a, b) -> float:
        a, b = sorted((mode_index(a), mode_index(b)))
        return getattr(self, f"lambda_{mode_name(a)}{mode_name(b)}")

    def as_row(self) -> dict[str, float]:
        return {c: getattr(self, c) for c in COLUMNS}

    def squeezed(self) -> dict[str, bool]:
        return {c: getattr(self, c) < len(FIELD_MODES[c]) for c in COLUMNS}


def squeeze_table(rho3, check: bool = True) -> dict[str, np.ndarray]:
    """All four principal variances for one matrix or a stack, keyed by column."""
    moments = compute_moments(rho3, check=check)
    return {c: principal_variance(moments, FIELD_MODES[c]) for c in COLUMNS}


def squeeze_report(rho3, check: bool = True) -> SqueezeReport:
    moments = compute_moments(rho3, check=check)
    if np.ndim(moments.number) != 1:
        raise ContractError("squeeze_report takes a single density matrix")
    values = [principal_variance(moments, FIELD_MODES[c]) for c in COLUMNS]
    return SqueezeReport(*values, moments=moments)


# ------------------------------------------------------------- closed forms
#
# Each function takes the probabilities of its family's canonical kets
# (pivot i) and returns (lambda_ij, lambda_ik, lambda_jk, lambda_ijk).


def _iii0(p000, p111):
    two = 2 + 4 * p111
    return two, two, two, 3 + 6 * p111


def _iii1a(p000, p100, p111):
    sq = np.sqrt
    lij = 2 * (1 + p100 + 2 * p111 - 2 * p000 * p100)
    ljk = 2 * (1 + 2 * p111 - 2 * sq(p100 * p111))
    lijk = (
        3
        + 2 * (p100 - p000 * p100 + 3 * p111)
        - 2 * np.abs(2 * sq(p100 * p111) - p000 * p100)
    )
    return lij, lij, ljk, lijk


def _iii1b(p000, p011, p111):
    sq = np.sqrt
    lij = 2 * (1 + p011 + 2 * p111 - 2 * p011 * p111)
    ljk = 2 * (1 + 2 * p011 + 2 * p111 - 2 * sq(p000 * p011))
    # The normal-ordered part is n_i + n_j + n_k - <a_i>^2 = 2 P011 + 3 P111 - P011 P111.
    lijk = (
        3
        + 2 * (2 * p011 - p011 * p111 + 3 * p111)
        - 2 * np.abs(2 * sq(p000 * p011) - p011 * p111)
    )
    return lij, lij, ljk, lijk


def _iii2_kets_000_001_011_111(p000, p001, p011, p111):
    """Variances for C000|000> + C001|001> + C011|011> + C111|111>."""
    sq = np.sqrt
    lij = 2 * (
        1
        + p011
        - p001 * p011
        + 2 * p111
        - p011 * p111
        - 2 * sq(p001 * p111) * p011
        - np.abs(2 * (sq(p001 * p111) * (1 - p011)) - p001 * p011 - p011 * p111)
    )
    lik = 2 * (
        1
        + p001
        - 2 * p000 * p001
        + p011
        + 2 * p111
        - 2 * p011 * p111
        - 4 * sq(p000 * p111 * p001 * p011)
    )
    ljk = 2 * (
        1
        + p001
        - p000 * p001
        + 2 * p011
        + 2 * p111
        - p001 * p011
        - 2 * sq(p000 * p011) * p001
        - np.abs(2 * (sq(p000 * p011) * (1 - p001)) - p000 * p001 - p001 * p011)
    )
    lijk = (
        3
        + 2 * (p001 - p000 * p001 + 2 * p011 - p001 * p011 + 3 * p111 - p011 * p111)
        - 4 * (sq(p000 * p011) * p001 + sq(p000 * p001 * p011 * p111) + sq(p001 * p111) * p011)
        - 2
        * np.abs(
            2
            * (
                sq(p000 * p011)
                - sq(p000 * p011) * p001
                + sq(p001 * p111)
                - sq(p000 * p001 * p011 * p111)
                - sq(p001 * p111) * p011
            )
            - p000 * p001
            - p001 * p011
            - p011 * p111
        )
    )
    return lij, lik, ljk, lijk


def _iii2(p000, p001, p101, p111):
    # Canonical kets 000, 001, 101, 111 are 000, 001, 011, 111 with i <-> j
    # swapped, which exchanges the ik and jk pairs.
    lij, lik, ljk, lijk = _iii2_kets_000_001_011_111(p000, p001, p101, p111)
    return lij, ljk, lik, lijk


def _iii3(p000, p101, p110):
    sq = np.sqrt
    lij = 2 * (1 + p101 + 2 * p110 - 2 * sq(p000 * p110))
    lik = 2 * (1 + p110 + 2 * p101 - 2 * sq(p000 * p101))
    ljk = 2 * (1 + p101 + p110 + 2 * sq(p101 * p110))
    lijk = (
        3
        + 2 * (2 * p101 + 2 * p110)
        - 4 * (sq(p000 * p101) + sq(p000 * p110))
        + 4 * sq(p101 * p110)
    )
    return lij, lik, ljk, lijk


_CLOSED_FORMS = {
    Family.III_0: _iii0,
    Family.III_1A: _iii1a,
    Family.III_1B: _iii1b,
    Family.III_2: _iii2,
    Family.III_3: _iii3,
}


def relabel_field(field: str, pivot) -> str:
    """Name of the variance that canonical ``field`` becomes under ``pivot``."""
    shift = mode_index(pivot)
    modes = sorted((m + shift) % 3 for m in FIELD_MODES[field])
    return "lambda_" + "".join(mode_name(m) for m in modes)


def closed_form_lambdas(family, probabilities, pivot="i") -> dict[str, np.ndarray]:
    """Vectorized closed forms; ``probabilities`` has shape ``(..., n_kets)``."""
    family = Family.parse(family)
    if family is Family.GENERAL:
        raise UnsupportedFamilyError("no closed form for the GENERAL family")
    p = np.asarray(probabilities, dtype=float)
    values = _CLOSED_FORMS[family](*np.moveaxis(p, -1, 0))
    out = {}
    for field, value in zip(COLUMNS, values):
        out[relabel_field(field, pivot)] = np.asarray(value, dtype=float) + 0 * p[..., 0]
    return {c: out[c] for c in COLUMNS}


def lambda_closed_form(spec: FamilySpec) -> SqueezeReport:
    if spec.family is Family.GENERAL:
        raise UnsupportedFamilyError("no closed form for the GENERAL family")
    amps = np.array(spec.amplitudes)
    if np.any(amps.imag != 0) or np.any(amps.real < 0):
        raise UnsupportedRegimeError("closed forms need nonnegative real amplitudes")
    values = closed_form_lambdas(spec.family, amps.real**2, spec.pivot)
    return SqueezeReport(*(float(values[c]) for c in COLUMNS))


# ---------------------------------------------------------- phase-scan oracle

_LEVELS = 3  # occupations 0, 1, 2: enough for <a a^dag> on states with n <= 1


def _bosonic_lowering():
    a1 = np.diag(np.sqrt(np.arange(1, _LEVELS)), k=1)
    eye = np.eye(_LEVELS)
    out = []
    for m in range(3):
        factors = [eye] * 3
        factors[m] = a1
        out.append(np.kron(np.kron(factors[0], factors[1]), factors[2]))
    return np.stack(out)


_BOSON_A = _bosonic_lowering()
_EMBED = np.array([_LEVELS**2 * (n >> 2) + _LEVELS * ((n >> 1) & 1) + (n & 1) for n in range(8)])


def embed_density(rho3) -> np.ndarray:
    """Place an 8x8 qubit density matrix into the 27-dim three-mode Fock space."""
    rho3 = np.asarray(rho3)
    out = np.zeros(rho3.shape[:-2] + (_LEVELS**3, _LEVELS**3), dtype=complex)
    out[..., _EMBED[:, None], _EMBED[None, :]] = rho3
    return out


class _QuadratureMoments:
    """Phase-independent pieces of Var(X_theta) for one state and mode set."""

    def __init__(self, rho3, modes):
        modes = sorted({mode_index(m) for m in modes})
        if len(modes) not in (2, 3):
            raise ContractError("the phase scan needs two or three modes")
        rho = embed_density(validate_density(rho3))
        a = _BOSON_A[modes].sum(axis=0)
        ad = a.conj().T
        self.mean = _expect(rho, a)
        self.anomalous = _expect(rho, a @ a)
        self.symmetric = _expect(rho, a @ ad + ad @ a).real

    def variance(self, theta):
        phase = np.exp(-1j * np.asarray(theta))
        mean_x = 2 * np.real(phase * self.mean)
        second = 2 * np.real(phase**2 * self.anomalous) + self.symmetric
        return second - mean_x**2


def quadrature_variance(rho3, modes, theta):
    """Variance of ``X_theta = sum_m (a_m e^{-i theta} + a_m^dag e^{i theta})``."""
    return _QuadratureMoments(rho3, modes).variance(theta)


def uncertainty_product(rho3, modes, theta: float = 0.0) -> float:
    """``Var(X_theta) * Var(X_{theta + pi/2})``; theta = 0 gives the X/Y pair."""
    q = _QuadratureMoments(rho3, modes)
    return float(q.variance(theta) * q.variance(theta + np.pi / 2))


def optimal_phase(rho3, modes, phase_steps: int = 10_000) -> tuple[float, float]:
    """``(theta, variance)`` at the minimizing common rotation phase."""
    if phase_steps < 3:
        raise ContractError("phase_steps must be at least 3")
    q = _QuadratureMoments(rho3, modes)
    step = np.pi / phase_steps
    grid = np.arange(phase_steps) * step
    values = q.variance(grid)
    best = int(np.argmin(values))
    theta, value = golden_section(
        lambda t: float(q.variance(t)), grid[best] - step, grid[best] + step, tol=1e-12
    )
    if values[best] <= value:
        return float(grid[best]), float(values[best])
    return float(theta), float(value)


def quadrature_variance_scan(rho3, modes, phase_steps: int = 10_000) -> float:
    """Grid-plus-golden-section minimum of the quadrature variance over the phase."""
    return optimal_phase(rho3, modes, phase_steps)[1]
