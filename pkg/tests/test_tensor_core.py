import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantum_opinion.errors import DimensionMismatchError, NormalizationError, NumericalIntegrityError
from quantum_opinion.mw_engine import operator_set
from quantum_opinion.tensor_core import (
    DensityMatrix,
    Operator,
    StateVector,
    basis_state,
    conjugate_sandwich,
    expectation,
    identity,
    outer_product,
    permutation_operator,
    random_state,
    superposition_state,
    tensor,
    uniform_state,
)


def test_basis_state_flat_index():
    psi = basis_state(2, 3, 3)
    assert psi.amplitude(2, 3) == 1
    assert np.flatnonzero(psi.amplitudes).tolist() == [5]
    assert psi.basis_label() == (2, 3)


def test_state_rejects_bad_norm():
    with pytest.raises(NormalizationError):
        StateVector(2, 2, np.array([1.0, 1.0, 0.0, 0.0]))


def test_state_rejects_wrong_length():
    with pytest.raises(DimensionMismatchError):
        StateVector(3, 3, np.array([1.0, 0.0, 0.0, 0.0]))


def test_state_is_read_only():
    psi = uniform_state(2)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0


def test_from_amplitudes_normalizes_on_request():
    psi = StateVector.from_amplitudes([1.0, 0.0, 0.0, 1.0], 2, normalize=True)
    np.testing.assert_allclose(psi.probabilities, [[0.5, 0.0], [0.0, 0.5]], atol=1e-15)
    with pytest.raises(NormalizationError):
        StateVector.from_amplitudes([0.0, 0.0, 0.0, 0.0], 2, normalize=True)


def test_superposition_state_is_not_a_basis_state():
    psi = superposition_state([(1, 1), (3, 3)], 3)
    assert psi.basis_label() is None
    assert psi.probabilities[0, 0] == pytest.approx(0.5)
    assert psi.probabilities[2, 2] == pytest.approx(0.5)


def test_outer_product_of_basis_state():
    rho = outer_product(basis_state(1, 1, 2))
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    np.testing.assert_array_equal(rho.matrix, expected)


def test_tensor_of_flip_and_identity_moves_first_label():
    flip = operator_set(2)["C"]
    op = tensor(flip, identity(2))
    assert op.apply(basis_state(1, 1, 2)).basis_label() == (2, 1)


def test_tensor_of_identities():
    op = tensor(identity(3), identity(3))
    np.testing.assert_array_equal(op.matrix, np.eye(9))
    assert op.name == "I⊗I"


def test_permutation_operator_maps_labels():
    swap_13 = permutation_operator({1: 3, 2: 2, 3: 1}, 3, "C")
    assert swap_13.is_unitary()
    assert swap_13.is_hermitian()
    np.testing.assert_array_equal(swap_13.matrix @ np.array([1, 0, 0]), [0, 0, 1])


def test_permutation_operator_rejects_non_permutation():
    with pytest.raises(DimensionMismatchError):
        permutation_operator({1: 1, 2: 1}, 2)


def test_operator_must_be_square():
    with pytest.raises(DimensionMismatchError):
        Operator(np.ones((2, 3)))


def test_conjugate_sandwich_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        conjugate_sandwich(identity(4), outer_product(basis_state(1, 1, 3)))


def test_expectation_of_payoff_operator_on_basis_state():
    observable = Operator(np.diag([0.0, -2.0, 2.0, 0.0]))
    assert expectation(observable, outer_product(basis_state(2, 1, 2))) == 2.0


def test_expectation_rejects_non_hermitian():
    observable = Operator(np.array([[0, 1], [0, 0]]))
    rho = DensityMatrix(np.eye(2) / 2)
    with pytest.raises(NumericalIntegrityError):
        expectation(observable, rho)


def test_expectation_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        expectation(identity(4), outer_product(basis_state(1, 1, 3)))


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(NumericalIntegrityError):
        DensityMatrix(np.eye(2))


def test_density_matrix_rejects_non_hermitian():
    with pytest.raises(NumericalIntegrityError):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))


def test_nan_amplitudes_rejected():
    with pytest.raises(NumericalIntegrityError):
        StateVector(2, 2, np.array([np.nan, 0, 0, 0]))


def test_with_phases_keeps_probabilities(rng):
    psi = random_state(3, rng)
    rotated = psi.with_phases(rng.uniform(0, 2 * np.pi, size=9))
    np.testing.assert_allclose(rotated.probabilities, psi.probabilities, atol=1e-12)


@given(seed=st.integers(min_value=0, max_value=2**32 - 1), dim=st.sampled_from([2, 3]))
@settings(deadline=None, max_examples=50)
def test_random_state_outer_product_is_a_pure_density_matrix(seed, dim):
    rho = outer_product(random_state(dim, np.random.default_rng(seed)))
    assert abs(np.trace(rho.matrix) - 1.0) < 1e-12
    np.testing.assert_allclose(rho.matrix @ rho.matrix, rho.matrix, atol=1e-12)
    assert np.all(rho.diagonal() >= -1e-12)


def _random_density(dim, rng, terms=3):
    weights = rng.dirichlet(np.ones(terms))
    matrix = sum(w * outer_product(random_state(dim, rng)).matrix for w in weights)
    return DensityMatrix(matrix)


def test_tensor_of_change_and_deny_on_basis_state():
    ops = operator_set(3)
    op = tensor(ops["C"], ops["D"])
    assert op.apply(basis_state(1, 2, 3)).basis_label() == (3, 1)


def test_conjugate_sandwich_moves_basis_projector():
    flip = operator_set(2)["C"]
    rho = conjugate_sandwich(tensor(flip, flip), outer_product(basis_state(1, 1, 2)))
    np.testing.assert_array_equal(rho.matrix, outer_product(basis_state(2, 2, 2)).matrix)


@given(seed=st.integers(min_value=0, max_value=2**32 - 1), dim=st.sampled_from([2, 3]))
@settings(deadline=None, max_examples=50)
def test_permutation_conjugation_keeps_density_invariants(seed, dim):
    rng = np.random.default_rng(seed)
    ops = operator_set(dim)
    names = list(ops)
    op = tensor(ops[names[rng.integers(len(names))]], ops[names[rng.integers(len(names))]])
    rho = _random_density(dim, rng)
    moved = conjugate_sandwich(op, rho).matrix
    assert abs(np.trace(moved) - 1.0) <= 1e-12
    np.testing.assert_allclose(moved, moved.conj().T, rtol=0, atol=1e-12)
    assert np.all(np.diag(moved).real >= -1e-12)
    np.testing.assert_allclose(np.sort(np.diag(moved).real), np.sort(rho.diagonal()), atol=1e-12)


def test_expectation_of_diagonal_observable_matches_weighted_sum(rng):
    for dim in (2, 3):
        for _ in range(20):
            rho = _random_density(dim, rng)
            weights = rng.uniform(-5.0, 5.0, size=dim * dim)
            brute = sum(weights[k] * rho.matrix[k, k].real for k in range(dim * dim))
            assert expectation(Operator(np.diag(weights)), rho) == pytest.approx(brute, abs=1e-12)


def test_tensor_is_associative_for_permutations():
    ops = list(operator_set(3).values())
    for first in ops:
        for second in ops:
            for third in ops:
                left = tensor(tensor(first, second), third)
                right = tensor(first, tensor(second, third))
                np.testing.assert_array_equal(left.matrix, right.matrix)
