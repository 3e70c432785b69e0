"""Negativity-based three-qubit classification (types I/II/III, subtypes III-0..III-3)."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .entanglement import BIPARTITION_COLUMNS, PAIR_COLUMNS, PAIRS, negativity_table
from .linalg import ContractError, mode_name

DEFAULT_EPSILON = 1e-9

COLUMNS = ("major", "subtype", "pattern_ij", "pattern_ik", "pattern_jk", "pivot")


class Major(str, enum.Enum):
    I_SEPARABLE = "I_SEPARABLE"
    II_BIPARTITE_ONLY = "II_BIPARTITE_ONLY"
    III_TRIPARTITE = "III_TRIPARTITE"


class Subtype(str, enum.Enum):
    III_0 = "III_0"
    III_1 = "III_1"
    III_2 = "III_2"
    III_3 = "III_3"


@dataclass(frozen=True)
class StateClass:
    major: Major
    subtype: Subtype | None
    zero_pattern: tuple[bool, bool, bool]
    pivot: str | None = None

    def __post_init__(self):
        if (self.subtype is None) != (self.major is not Major.III_TRIPARTITE):
            raise ContractError("subtype is present exactly for type III states")
        if self.subtype is not None and int(self.subtype.value[-1]) != sum(self.zero_pattern):
            raise ContractError("subtype does not match the entangled-pair count")

    def as_row(self) -> dict[str, str]:
        return {
            "major": self.major.value,
            "subtype": self.subtype.value if self.subtype else "",
            "pattern_ij": str(int(self.zero_pattern[0])),
            "pattern_ik": str(int(self.zero_pattern[1])),
            "pattern_jk": str(int(self.zero_pattern[2])),
            "pivot": self.pivot or "",
        }


def _pivot(pattern) -> str | None:
    entangled = [pair for pair, on in zip(PAIRS, pattern) if on]
    if len(entangled) == 1:
        (a, b), = entangled
        return mode_name(3 - a - b)
    if len(entangled) == 2:
        (shared,) = set(entangled[0]) & set(entangled[1])
        return mode_name(shared)
    return None


def classify_negativities(table, epsilon: float = DEFAULT_EPSILON) -> StateClass:
    """Classify from a mapping holding the seven negativity columns."""
    if not epsilon > 0:
        raise ContractError("epsilon must be positive")
    pattern = tuple(bool(table[c] > epsilon) for c in PAIR_COLUMNS)
    if table["N_ijk"] > epsilon:
        return StateClass(Major.III_TRIPARTITE, Subtype(f"III_{sum(pattern)}"), pattern, _pivot(pattern))
    if any(pattern) or any(table[c] > epsilon for c in BIPARTITION_COLUMNS):
        return StateClass(Major.II_BIPARTITE_ONLY, None, pattern, None)
    return StateClass(Major.I_SEPARABLE, None, pattern, None)


def classify_state(rho3, epsilon: float = DEFAULT_EPSILON) -> StateClass:
    table = negativity_table(rho3)
    if np.ndim(table["N_ijk"]) != 0:
        raise ContractError("classify_state takes a single density matrix")
    return classify_negativities(table, epsilon)


def classify_columns(table, epsilon: float = DEFAULT_EPSILON) -> dict[str, np.ndarray]:
    """Vectorized classification producing the CSV columns for a batch."""
    pattern = np.stack([np.asarray(table[c]) > epsilon for c in PAIR_COLUMNS], axis=-1)
    count = pattern.sum(axis=-1)
    tripartite = np.asarray(table["N_ijk"]) > epsilon
    bipartite = pattern.any(axis=-1) | np.any(
        np.stack([np.asarray(table[c]) > epsilon for c in BIPARTITION_COLUMNS], axis=-1), axis=-1
    )
    major = np.where(
        tripartite,
        Major.III_TRIPARTITE.value,
        np.where(bipartite, Major.II_BIPARTITE_ONLY.value, Major.I_SEPARABLE.value),
    )
    subtype = np.where(tripartite, np.char.add("III_", count.astype(str)), "")
    pivots = np.array([_pivot(p) or "" for p in pattern.reshape(-1, 3)]).reshape(count.shape)
    pivots = np.where(tripartite, pivots, "")
    return {
        "major": major,
        "subtype": subtype,
        "pattern_ij": pattern[..., 0].astype(int),
        "pattern_ik": pattern[..., 1].astype(int),
        "pattern_jk": pattern[..., 2].astype(int),
        "pivot": pivots,
    }
