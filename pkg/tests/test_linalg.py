import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clonecap.errors import ContractError, NotPSDError, ShapeError
from clonecap.linalg import (
    check_density,
    hermitian_eigensystem,
    matrix_sqrt_psd,
    partial_trace,
    partial_transpose,
    random_density,
    tensor_product,
    trace_distance,
)
from conftest import random_hermitian

PHI_PLUS = np.array([1, 0, 0, 1]) / np.sqrt(2)
PHI_PLUS_STATE = np.outer(PHI_PLUS, PHI_PLUS)


def test_tensor_product_identities():
    assert np.array_equal(tensor_product(np.eye(2), np.eye(3)), np.eye(6))
    assert np.array_equal(tensor_product(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))


def test_tensor_product_mixed_product_rule(rng):
    x, y = rng.normal(size=(2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2))
    u, v = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.abs(tensor_product(x, y) @ tensor_product(u, v) - tensor_product(x @ u, y @ v)).max() < 1e-13


def test_tensor_product_is_associative(rng):
    a, b, c = (rng.normal(size=(2, 2)) for _ in range(3))
    assert np.allclose(tensor_product(tensor_product(a, b), c), tensor_product(a, tensor_product(b, c)), atol=1e-15)


def test_partial_trace_of_product_state(rng):
    rho, sigma = random_density(2, rng), random_density(3, rng)
    prod = tensor_product(rho, sigma)
    assert np.allclose(partial_trace(prod, (2, 3), keep=0), rho, atol=1e-14)
    assert np.allclose(partial_trace(prod, (2, 3), keep="B"), sigma, atol=1e-14)


def test_partial_trace_of_bell_state_is_maximally_mixed():
    assert np.allclose(partial_trace(PHI_PLUS_STATE, (2, 2), keep=0), np.eye(2) / 2)


def test_partial_trace_shape_error():
    with pytest.raises(ShapeError):
        partial_trace(np.eye(5), (2, 3))


def test_partial_transpose_of_bell_state():
    w = np.linalg.eigvalsh(partial_transpose(PHI_PLUS_STATE, (2, 2)))
    assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5])


def test_partial_transpose_of_product(rng):
    rho, sigma = random_density(2, rng), random_density(3, rng)
    assert np.allclose(
        partial_transpose(tensor_product(rho, sigma), (2, 3), on=1), tensor_product(rho, sigma.T)
    )


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0, 1]))
def test_partial_transpose_is_an_involution(seed, on):
    m = random_hermitian(6, np.random.default_rng(seed))
    pt = partial_transpose(m, (2, 3), on=on)
    assert np.array_equal(partial_transpose(pt, (2, 3), on=on), m)
    assert abs(np.trace(pt) - np.trace(m)) < 1e-13
    assert np.abs(pt - pt.conj().T).max() < 1e-14


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_partial_transpose_invisible_to_traced_factor(seed):
    m = random_hermitian(6, np.random.default_rng(seed))
    assert np.allclose(partial_trace(partial_transpose(m, (2, 3), on=1), (2, 3), keep=0), partial_trace(m, (2, 3), keep=0))


def test_eigensystem_of_diagonal():
    w, _ = hermitian_eigensystem(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [1, 2, 3])


def test_eigensystem_reconstruction(rng):
    m = random_hermitian(8, rng)
    w, v = hermitian_eigensystem(m)
    assert np.all(np.diff(w) >= 0)
    assert np.abs(m - (v * w) @ v.conj().T).max() <= 1e-10
    assert np.abs(v.conj().T @ v - np.eye(8)).max() <= 1e-10


def test_eigensystem_rejects_non_hermitian():
    with pytest.raises(ContractError):
        hermitian_eigensystem(np.array([[0, 1], [0, 0]]))


def test_matrix_sqrt():
    assert np.allclose(matrix_sqrt_psd(np.eye(3)), np.eye(3))
    assert np.allclose(matrix_sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


def test_matrix_sqrt_squares_back(rng):
    m = random_density(5, rng) * 5
    s = matrix_sqrt_psd(m)
    assert np.abs(s @ s - m).max() <= 1e-10


def test_matrix_sqrt_clamps_noise_but_rejects_negative():
    assert np.allclose(matrix_sqrt_psd(np.diag([1.0, -1e-12])), np.diag([1.0, 0.0]))
    with pytest.raises(NotPSDError):
        matrix_sqrt_psd(np.diag([1.0, -1e-6]))


def test_trace_distance_examples(rng):
    rho = random_density(3, rng)
    assert trace_distance(rho, rho) < 1e-15
    assert trace_distance(np.diag([1, 0]), np.diag([0, 1])) == pytest.approx(1.0)
    assert trace_distance(np.eye(2) / 2, np.diag([1, 0])) == pytest.approx(0.5)
    with pytest.raises(ShapeError):
        trace_distance(np.eye(2), np.eye(3))


def test_check_density_contract():
    with pytest.raises(ContractError):
        check_density(np.eye(2))
    with pytest.raises(NotPSDError):
        check_density(np.diag([1.5, -0.5]))
