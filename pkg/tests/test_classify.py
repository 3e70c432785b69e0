import numpy as np
import pytest

from trisqueeze.classify import (
    Major,
    StateClass,
    Subtype,
    classify_columns,
    classify_negativities,
    classify_state,
)
from trisqueeze.entanglement import negativity_table
from trisqueeze.linalg import ContractError, tensor
from trisqueeze.states import (
    Family,
    FamilySpec,
    SamplerConfig,
    basis_state,
    build_state,
    ghz_state,
    pure_density,
    sample_amplitudes,
    states_from_amplitudes,
    w_state,
)


def state_class(psi):
    return classify_state(pure_density(psi))


def test_ghz_and_w():
    ghz = state_class(ghz_state())
    assert (ghz.major, ghz.subtype, ghz.zero_pattern) == (Major.III_TRIPARTITE, Subtype.III_0, (False,) * 3)
    w = state_class(w_state())
    assert (w.major, w.subtype, w.pivot) == (Major.III_TRIPARTITE, Subtype.III_3, None)


def test_separable():
    c = state_class(basis_state("010"))
    assert c.major is Major.I_SEPARABLE and c.subtype is None


def test_bipartite_only():
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    psi = np.kron(bell, [1, 0])  # modes i, j entangled, k apart
    c = state_class(psi)
    assert c.major is Major.II_BIPARTITE_ONLY
    assert c.zero_pattern == (True, False, False)


def test_mixed_separable():
    assert classify_state(np.eye(8) / 8).major is Major.I_SEPARABLE


@pytest.mark.parametrize(
    "family,pivot,subtype,want_pivot",
    [
        (Family.III_1A, "i", Subtype.III_1, "i"),
        (Family.III_1A, "k", Subtype.III_1, "k"),
        (Family.III_1B, "j", Subtype.III_1, "j"),
        (Family.III_2, "i", Subtype.III_2, "i"),
        (Family.III_2, "j", Subtype.III_2, "j"),
        (Family.III_3, "i", Subtype.III_3, None),
    ],
)
def test_family_subtypes_and_pivots(family, pivot, subtype, want_pivot):
    amps = sample_amplitudes(family, SamplerConfig(seed=1, count=200))
    states = states_from_amplitudes(family, amps, pivot)
    cols = classify_columns(negativity_table(pure_density(states)))
    assert np.all(cols["subtype"] == subtype.value)
    assert np.all(cols["pivot"] == (want_pivot or ""))
    single = state_class(states[0])
    assert single.subtype is subtype and single.pivot == want_pivot


def test_vectorized_matches_scalar(complex_states):
    table = negativity_table(pure_density(complex_states[:50]))
    cols = classify_columns(table)
    for n in range(50):
        row = {k: v[n] for k, v in table.items()}
        c = classify_negativities(row).as_row()
        assert c["major"] == cols["major"][n]
        assert c["subtype"] == cols["subtype"][n]
        assert c["pivot"] == cols["pivot"][n]


def test_epsilon_sets_the_cut():
    spec = FamilySpec.from_probabilities(Family.III_0, [1 - 1e-20, 1e-20])
    table = negativity_table(pure_density(build_state(spec)))
    assert classify_negativities(table, 1e-9).major is Major.I_SEPARABLE
    spec = FamilySpec.from_probabilities(Family.III_0, [1 - 1e-12, 1e-12])
    table = negativity_table(pure_density(build_state(spec)))
    assert table["N_ijk"] == pytest.approx(2e-6, rel=1e-3)
    assert classify_negativities(table, 1e-9).subtype is Subtype.III_0
    assert classify_negativities(table, 1e-5).major is Major.I_SEPARABLE
    with pytest.raises(ContractError):
        classify_negativities(table, 0.0)


def test_state_class_invariants():
    with pytest.raises(ContractError):
        StateClass(Major.III_TRIPARTITE, None, (False, False, False))
    with pytest.raises(ContractError):
        StateClass(Major.III_TRIPARTITE, Subtype.III_2, (True, False, False))
    with pytest.raises(ContractError):
        StateClass(Major.I_SEPARABLE, Subtype.III_0, (False, False, False))


def test_product_of_mixed_states_is_separable():
    a = np.diag([0.3, 0.7]).astype(complex)
    assert classify_state(tensor(a, a, a)).major is Major.I_SEPARABLE
