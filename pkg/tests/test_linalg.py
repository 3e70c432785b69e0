import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_density
from trisqueeze.linalg import (
    ContractError,
    apply_mode_operator,
    eigen_hermitian,
    eigvalsh,
    lowering_operator,
    partial_trace,
    partial_transpose,
    raising_operator,
    tensor,
)
from trisqueeze.states import basis_state

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def hermitian(re, im):
    m = re + 1j * im
    return (m + m.conj().T) / 2


@settings(max_examples=60, deadline=None)
@given(arrays(float, (8, 8), elements=finite), arrays(float, (8, 8), elements=finite))
def test_eigenvalues_match_lapack(re, im):
    m = hermitian(re, im)
    ours = eigvalsh(m)
    ref = np.linalg.eigvalsh(m)
    assert np.all(np.diff(ours) >= 0)
    assert np.allclose(ours, ref, atol=1e-11 * max(1.0, np.abs(ref).max()))


def test_eigenvectors_diagonalize(rng):
    m = hermitian(rng.standard_normal((8, 8)), rng.standard_normal((8, 8)))
    w, v = eigen_hermitian(m, vectors=True)
    assert np.allclose(v.conj().T @ v, np.eye(8), atol=1e-12)
    assert np.allclose(m @ v, v * w, atol=1e-12)


def test_stack_matches_single(rng):
    stack = np.array([hermitian(rng.standard_normal((4, 4)), rng.standard_normal((4, 4))) for _ in range(20)])
    together = eigvalsh(stack)
    for m, w in zip(stack, together):
        assert np.allclose(eigvalsh(m), w, atol=1e-14)


@pytest.mark.parametrize("dim", [1, 2, 3, 5])
def test_small_and_odd_sizes(rng, dim):
    m = hermitian(rng.standard_normal((dim, dim)), rng.standard_normal((dim, dim)))
    assert np.allclose(eigvalsh(m), np.linalg.eigvalsh(m), atol=1e-12)


def test_diagonal_and_degenerate():
    assert np.array_equal(eigvalsh(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0])
    assert np.allclose(eigvalsh(np.ones((4, 4))), [0, 0, 0, 4], atol=1e-14)


def test_non_hermitian_rejected():
    m = np.zeros((4, 4))
    m[0, 1] = 1.0
    with pytest.raises(ContractError):
        eigvalsh(m)


def test_bell_partial_transpose_spectrum():
    bell = (np.kron([1, 0], [1, 0]) + np.kron([0, 1], [0, 1])) / np.sqrt(2)
    rho = np.outer(bell, bell).astype(complex)
    for mode in "ij":
        assert np.allclose(eigvalsh(partial_transpose(rho, mode)), [-0.5, 0.5, 0.5, 0.5], atol=1e-14)


@pytest.mark.parametrize("mode", "ijk")
def test_partial_transpose_is_an_involution(rng, mode):
    rho = random_density(rng)
    assert np.array_equal(partial_transpose(partial_transpose(rho, mode), mode), rho)
    assert np.isclose(np.trace(partial_transpose(rho, mode)), 1.0)


def test_partial_transpose_of_product_is_local():
    a = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]])
    b = np.array([[0.4, 0.3j], [-0.3j, 0.6]])
    c = np.diag([0.5, 0.5]).astype(complex)
    rho = tensor(a, b, c)
    assert np.allclose(partial_transpose(rho, "j"), tensor(a, b.T, c))


def test_partial_transpose_contract():
    with pytest.raises(ContractError):
        partial_transpose(np.eye(4) / 4, "k")
    with pytest.raises(ContractError):
        partial_transpose(np.eye(3) / 3, "i")


@pytest.mark.parametrize("keep", [("i",), ("j",), ("k",), ("i", "j"), ("i", "k"), ("j", "k")])
def test_partial_trace_preserves_trace_and_positivity(rng, keep):
    rho = random_density(rng)
    red = partial_trace(rho, keep)
    assert red.shape == (2 ** len(keep),) * 2
    assert np.isclose(np.trace(red), 1.0, atol=1e-14)
    assert np.all(np.linalg.eigvalsh(red) > -1e-14)


def test_partial_trace_of_product():
    a, b, c = (np.diag([p, 1 - p]).astype(complex) for p in (0.1, 0.3, 0.8))
    rho = tensor(a, b, c)
    assert np.allclose(partial_trace(rho, ("i", "k")), tensor(a, c))
    assert np.allclose(partial_trace(rho, ("j",)), b)


def test_partial_trace_commutes_with_partial_transpose_of_kept_mode(rng):
    rho = random_density(rng)
    left = partial_trace(partial_transpose(rho, "i"), ("i", "j"))
    right = partial_transpose(partial_trace(rho, ("i", "j")), "i")
    assert np.allclose(left, right, atol=1e-15)


def test_mode_operators():
    assert np.allclose(apply_mode_operator(basis_state("100"), "i", "lower"), basis_state("000"))
    assert np.allclose(apply_mode_operator(basis_state("000"), "i", "lower"), 0)
    assert np.allclose(apply_mode_operator(basis_state("010"), "k", "raise"), basis_state("011"))
    assert np.allclose(apply_mode_operator(basis_state("001"), "k", "raise"), 0)
    for m in "ijk":
        assert np.allclose(raising_operator(m), lowering_operator(m).conj().T)
