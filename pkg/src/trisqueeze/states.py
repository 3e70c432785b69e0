"""Parametric three-qubit pure-state families and their random sampler.

Each family has a canonical ket set written with the distinguished (pivot)
mode in position ``i``; other pivots are obtained by the cyclic relabelling
``i -> pivot``, ``j -> next``, ``k -> next-but-one``.

    III_0   000, 111
    III_1A  000, 100, 111           (pivot outside the entangled pair)
    III_1B  000, 011, 111
    III_2   000, 001, 101, 111      (pivot shared by both entangled pairs)
    III_3   000, 101, 110
    GENERAL all eight kets
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .linalg import MODES, ContractError, mode_index, mode_name

NORM_TOL = 1e-12


class Family(str, enum.Enum):
    III_0 = "III_0"
    III_1A = "III_1A"
    III_1B = "III_1B"
    III_2 = "III_2"
    III_3 = "III_3"
    GENERAL = "GENERAL"

    @classmethod
    def parse(cls, value) -> "Family":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ContractError(f"unknown family {value!r}") from None


class AmplitudeMode(str, enum.Enum):
    REAL_NONNEGATIVE = "REAL_NONNEGATIVE"
    REAL_SIGNED = "REAL_SIGNED"
    COMPLEX = "COMPLEX"


class Measure(str, enum.Enum):
    SPHERE_UNIFORM = "SPHERE_UNIFORM"
    SIMPLEX_UNIFORM = "SIMPLEX_UNIFORM"


CANONICAL_KETS = {
    Family.III_0: ("000", "111"),
    Family.III_1A: ("000", "100", "111"),
    Family.III_1B: ("000", "011", "111"),
    Family.III_2: ("000", "001", "101", "111"),
    Family.III_3: ("000", "101", "110"),
    Family.GENERAL: tuple(format(n, "03b") for n in range(8)),
}

DEFAULT_COUNTS = {Family.III_0: 10_000}
DEFAULT_COUNT = 100_000


def default_count(family) -> int:
    return DEFAULT_COUNTS.get(Family.parse(family), DEFAULT_COUNT)


def relabel_ket(ket: str, pivot) -> str:
    """Move canonical mode ``c`` to ``(c + pivot) % 3``."""
    shift = mode_index(pivot)
    bits = ["0"] * 3
    for c, b in enumerate(ket):
        bits[(c + shift) % 3] = b
    return "".join(bits)


def support_kets(family, pivot="i") -> tuple[str, ...]:
    family = Family.parse(family)
    if family is Family.GENERAL:
        return CANONICAL_KETS[family]
    return tuple(relabel_ket(k, pivot) for k in CANONICAL_KETS[family])


def support_indices(family, pivot="i") -> list[int]:
    return [int(k, 2) for k in support_kets(family, pivot)]


@dataclass(frozen=True)
class FamilySpec:
    """A member of one parametric family, amplitudes ordered as its kets."""

    family: Family
    amplitudes: tuple[complex, ...]
    pivot: str = "i"

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "pivot", mode_name(self.pivot))
        amps = tuple(complex(a) for a in self.amplitudes)
        object.__setattr__(self, "amplitudes", amps)
        expected = len(CANONICAL_KETS[self.family])
        if len(amps) != expected:
            raise ContractError(
                f"{self.family.value} takes {expected} amplitudes, got {len(amps)}"
            )
        norm = sum(abs(a) ** 2 for a in amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ContractError(f"amplitudes are not normalized (sum |c|^2 = {norm!r})")

    @property
    def kets(self) -> tuple[str, ...]:
        return support_kets(self.family, self.pivot)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(np.array(self.amplitudes)) ** 2

    def probability(self, ket: str) -> float:
        return float(self.probabilities[self.kets.index(ket)])

    @classmethod
    def from_probabilities(cls, family, probabilities: Sequence[float], pivot="i") -> "FamilySpec":
        """Nonnegative real amplitudes ``sqrt(P)``; tiny rounding is renormalized."""
        p = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
        total = p.sum()
        if abs(total - 1.0) > 1e-9:
            raise ContractError(f"probabilities sum to {total!r}, not 1")
        amps = np.sqrt(p / total)
        amps = amps / np.sqrt(np.sum(amps**2))
        return cls(family, tuple(amps), pivot)

    def to_json(self) -> dict:
        return {
            "family": self.family.value,
            "pivot": self.pivot,
            "amplitudes": [{"re": a.real, "im": a.imag} for a in self.amplitudes],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data) -> "FamilySpec":
        if isinstance(data, str):
            data = json.loads(data)
        amps = tuple(complex(a["re"], a["im"]) for a in data["amplitudes"])
        return cls(data["family"], amps, data.get("pivot", "i"))


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 20240601
    count: int | None = None
    amplitude_mode: AmplitudeMode = AmplitudeMode.REAL_NONNEGATIVE
    measure: Measure = Measure.SPHERE_UNIFORM

    def __post_init__(self):
        object.__setattr__(self, "amplitude_mode", AmplitudeMode(self.amplitude_mode))
        object.__setattr__(self, "measure", Measure(self.measure))
        if self.count is not None and self.count < 0:
            raise ContractError("count must be nonnegative")
        if not 0 <= int(self.seed) < 2**64:
            raise ContractError("seed must fit in 64 bits")

    def resolved_count(self, family) -> int:
        return default_count(family) if self.count is None else self.count


# ------------------------------------------------------------------- sampling


def sample_amplitudes(family, cfg: SamplerConfig) -> np.ndarray:
    """Draw ``count`` amplitude vectors for ``family`` as a ``(count, n)`` array.

    Real modes return a float array, COMPLEX a complex one. The stream depends
    only on ``(family, cfg)``.
    """
    family = Family.parse(family)
    n = len(CANONICAL_KETS[family])
    count = cfg.resolved_count(family)
    rng = np.random.default_rng(int(cfg.seed))
    mode = cfg.amplitude_mode

    if cfg.measure is Measure.SPHERE_UNIFORM:
        if mode is AmplitudeMode.COMPLEX:
            amps = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
        else:
            amps = rng.standard_normal((count, n))
            if mode is AmplitudeMode.REAL_NONNEGATIVE:
                amps = np.abs(amps)
    else:
        probs = rng.dirichlet(np.ones(n), size=count) if count else np.empty((0, n))
        amps = np.sqrt(probs)
        if mode is AmplitudeMode.REAL_SIGNED:
            amps = amps * rng.choice([-1.0, 1.0], size=(count, n))
        elif mode is AmplitudeMode.COMPLEX:
            amps = amps * np.exp(2j * np.pi * rng.random((count, n)))

    norms = np.sqrt(np.sum(np.abs(amps) ** 2, axis=1, keepdims=True))
    return amps / norms


def sample_family(family, cfg: SamplerConfig, pivot="i") -> Iterator[FamilySpec]:
    family = Family.parse(family)
    for row in sample_amplitudes(family, cfg):
        yield FamilySpec(family, tuple(row), pivot)


# ------------------------------------------------------------------- building


def states_from_amplitudes(family, amplitudes, pivot="i") -> np.ndarray:
    """Place a ``(..., n)`` array of family amplitudes into 8-dim state vectors."""
    amplitudes = np.asarray(amplitudes)
    idx = support_indices(family, pivot)
    if amplitudes.shape[-1] != len(idx):
        raise ContractError("amplitude count does not match the family")
    out = np.zeros(amplitudes.shape[:-1] + (8,), dtype=complex)
    out[..., idx] = amplitudes
    return out


def build_state(spec: FamilySpec) -> np.ndarray:
    return states_from_amplitudes(spec.family, np.array(spec.amplitudes), spec.pivot)


def pure_density(state) -> np.ndarray:
    """``|psi><psi|`` for a state vector or a stack of them."""
    state = np.asarray(state, dtype=complex)
    return state[..., :, None] * np.conj(state[..., None, :])


def basis_state(ket: str) -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[int(ket, 2)] = 1.0
    return v


def ghz_state() -> np.ndarray:
    return (basis_state("000") + basis_state("111")) / np.sqrt(2)


def w_state() -> np.ndarray:
    return (basis_state("001") + basis_state("010") + basis_state("100")) / np.sqrt(3)


def permute_modes(state, perm: Sequence[int]) -> np.ndarray:
    """Relabel modes: the qubit at position ``m`` moves to ``perm[m]``."""
    state = np.asarray(state)
    if sorted(perm) != [0, 1, 2]:
        raise ContractError(f"{perm!r} is not a permutation of the modes")
    t = state.reshape(state.shape[:-1] + (2, 2, 2))
    lead = len(state.shape) - 1
    inverse = [0, 0, 0]
    for m, target in enumerate(perm):
        inverse[target] = m
    axes = list(range(lead)) + [lead + inverse[t_] for t_ in range(3)]
    return t.transpose(axes).reshape(state.shape)


def random_unitary_2(rng) -> np.ndarray:
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))

