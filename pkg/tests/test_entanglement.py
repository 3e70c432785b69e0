import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density
from trisqueeze.entanglement import (
    COLUMNS,
    EntanglementReport,
    negativity_bipartition,
    negativity_pair,
    negativity_table,
    tripartite_negativity,
)
from trisqueeze.linalg import ContractError, partial_transpose, tensor
from trisqueeze.states import (
    Family,
    FamilySpec,
    basis_state,
    build_state,
    ghz_state,
    permute_modes,
    pure_density,
    random_unitary_2,
    w_state,
)

W_PAIR = (np.sqrt(5) - 1) / 3


def test_ghz():
    r = tripartite_negativity(pure_density(ghz_state()))
    assert r.n_ijk == pytest.approx(1.0, abs=1e-12)
    assert (r.n_ij, r.n_ik, r.n_jk) == (0.0, 0.0, 0.0)
    assert r.n_i_jk == pytest.approx(1.0, abs=1e-12)


def test_w_state():
    r = tripartite_negativity(pure_density(w_state()))
    assert r.n_ijk == pytest.approx(2 * np.sqrt(2) / 3, abs=1e-12)
    for a, b in ("ij", "ik", "jk"):
        assert r.pair(a, b) == pytest.approx(W_PAIR, abs=1e-12)


def test_w_state_against_lapack():
    rho = pure_density(w_state())
    for m in range(3):
        ev = np.linalg.eigvalsh(partial_transpose(rho, m))
        assert negativity_bipartition(rho, m) == pytest.approx(-2 * ev[ev < 0].sum(), abs=1e-12)


def test_product_state_is_unentangled():
    r = tripartite_negativity(pure_density(basis_state("101")))
    assert all(v == 0.0 for v in r.as_row().values())
    # zero is +0.0, never -0.0
    assert all(np.copysign(1.0, v) == 1.0 for v in r.as_row().values())


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-6, 1 - 1e-6))
def test_iii0_bipartitions(p):
    spec = FamilySpec.from_probabilities(Family.III_0, [1 - p, p])
    r = tripartite_negativity(pure_density(build_state(spec)))
    expected = 2 * np.sqrt(p * (1 - p))
    for v in (r.n_i_jk, r.n_j_ik, r.n_k_ij, r.n_ijk):
        assert v == pytest.approx(expected, abs=1e-10)
    assert (r.n_ij, r.n_ik, r.n_jk) == (0.0, 0.0, 0.0)


def test_pair_negativity_is_symmetric(rng):
    rho = random_density(rng, rank=2)
    for a, b in ((0, 1), (0, 2), (1, 2)):
        assert negativity_pair(rho, a, b) == negativity_pair(rho, b, a)


def test_range_on_random_states(complex_states):
    table = negativity_table(pure_density(complex_states))
    for c in COLUMNS:
        assert np.all(table[c] >= 0.0) and np.all(table[c] <= 1.0 + 1e-12)


def test_local_unitary_invariance(rng, complex_states):
    rhos = pure_density(complex_states[:50])
    u = tensor(random_unitary_2(rng), random_unitary_2(rng), random_unitary_2(rng))
    rotated = u @ rhos @ u.conj().T
    a, b = negativity_table(rhos), negativity_table(rotated)
    for c in COLUMNS:
        assert np.allclose(a[c], b[c], atol=1e-10)


def test_mode_permutation_covariance(complex_states):
    states = complex_states[:50]
    base = negativity_table(pure_density(states))
    moved = negativity_table(pure_density(permute_modes(states, (1, 2, 0))))
    # i->j, j->k, k->i
    assert np.allclose(moved["N_jk"], base["N_ij"], atol=1e-12)
    assert np.allclose(moved["N_ij"], base["N_ik"], atol=1e-12)
    assert np.allclose(moved["N_ik"], base["N_jk"], atol=1e-12)
    assert np.allclose(moved["N_j-ik"], base["N_i-jk"], atol=1e-12)
    assert np.allclose(moved["N_ijk"], base["N_ijk"], atol=1e-12)


@pytest.mark.parametrize(
    "family,probs,nonzero",
    [
        (Family.III_0, [0.5, 0.5], ()),
        (Family.III_1A, [0.4, 0.3, 0.3], ("N_jk",)),
        (Family.III_1B, [0.4, 0.3, 0.3], ("N_jk",)),
        (Family.III_2, [0.25, 0.25, 0.25, 0.25], ("N_ij", "N_ik")),
        (Family.III_3, [0.4, 0.3, 0.3], ("N_ij", "N_ik", "N_jk")),
    ],
)
def test_family_zero_patterns(family, probs, nonzero):
    r = tripartite_negativity(pure_density(build_state(FamilySpec.from_probabilities(family, probs))))
    row = r.as_row()
    for c in ("N_ij", "N_ik", "N_jk"):
        assert (row[c] > 1e-9) == (c in nonzero), c
    assert row["N_ijk"] > 1e-9


def test_report_row_round_trip():
    r = tripartite_negativity(pure_density(w_state()))
    assert EntanglementReport.from_row(r.as_row()) == r


def test_rejects_invalid_density():
    with pytest.raises(ContractError):
        negativity_table(np.eye(8))  # trace 8
    with pytest.raises(ContractError):
        negativity_table(np.eye(4) / 4)
    with pytest.raises(ContractError):
        tripartite_negativity(pure_density(np.stack([ghz_state(), w_state()])))
