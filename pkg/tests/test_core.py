import numpy as np
import pytest
from hypothesis import given, settings

from fidsep.core import (
    DensityMatrix,
    NotPSDError,
    PureState,
    SignatureError,
    StateError,
    basis_state,
    bell_state,
    conjugate,
    haar_unitary,
    partial_trace,
    psd_sqrt,
    purify,
    random_density_matrix,
    random_pure_state,
    schmidt_decompose,
    tensor_product,
    tensor_product_dm,
)

from conftest import seeds


def test_tensor_product_of_basis_states():
    zero = basis_state((2,), (0,))
    out = tensor_product(zero, zero)
    np.testing.assert_allclose(out.amplitudes, [1, 0, 0, 0])


def test_tensor_product_signature(rng):
    out = tensor_product(random_pure_state((2,), rng), random_pure_state((3,), rng))
    assert out.dims == (2, 3)
    assert out.amplitudes.size == 6


def test_tensor_product_keeps_norm():
    out = tensor_product(bell_state(), basis_state((2,), (0,)))
    assert abs(np.linalg.norm(out.amplitudes) - 1) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_tensor_product_norm_is_multiplicative(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    b = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert abs(np.linalg.norm(np.kron(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) <= 1e-12 * (
        1 + np.linalg.norm(a) * np.linalg.norm(b)
    )
    out = tensor_product(PureState.from_vector(a), PureState.from_vector(b))
    assert abs(np.linalg.norm(out.amplitudes) - 1) <= 1e-12


def test_state_validation():
    with pytest.raises(StateError):
        PureState(np.array([1.0, 1.0]), (2,))
    with pytest.raises(SignatureError):
        PureState(np.array([1.0, 0, 0]), (2,))
    with pytest.raises(SignatureError):
        PureState(np.array([1.0]), (0,))
    with pytest.raises(StateError):
        DensityMatrix(np.array([[1.0, 1.0], [0.0, 0.0]]), (2,))
    with pytest.raises(StateError):
        DensityMatrix(np.eye(2), (2,))
    with pytest.raises(NotPSDError):
        DensityMatrix(np.diag([1.5, -0.5]), (2,))


def test_states_are_immutable(rng):
    psi = random_pure_state((2, 2), rng)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0


def test_partial_trace_of_bell_is_maximally_mixed():
    out = partial_trace(bell_state().density(), [0])
    np.testing.assert_allclose(out.matrix, np.eye(2) / 2, atol=1e-15)
    assert out.dims == (2,)


def test_partial_trace_of_product(rng):
    rho = random_density_matrix((2,), rng)
    sigma = random_density_matrix((3,), rng)
    out = partial_trace(tensor_product_dm(rho, sigma), [0])
    np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-14)
    out = partial_trace(tensor_product_dm(rho, sigma), [1])
    np.testing.assert_allclose(out.matrix, sigma.matrix, atol=1e-14)


def test_partial_trace_keep_all_is_identity(rng):
    rho = random_density_matrix((2, 3), rng)
    np.testing.assert_allclose(partial_trace(rho, [0, 1]).matrix, rho.matrix, atol=1e-15)


def test_partial_trace_reorders_kept_subsystems(rng):
    a, b, c = (random_density_matrix((d,), rng) for d in (2, 3, 2))
    rho = tensor_product_dm(tensor_product_dm(a, b), c)
    out = partial_trace(rho, [2, 0])
    assert out.dims == (2, 2)
    np.testing.assert_allclose(out.matrix, np.kron(c.matrix, a.matrix), atol=1e-14)
    assert abs(np.trace(out.matrix) - 1) <= 1e-12


def test_partial_trace_rejects_bad_index(rng):
    with pytest.raises(SignatureError):
        partial_trace(random_density_matrix((2, 2), rng), [2])
    with pytest.raises(SignatureError):
        partial_trace(random_density_matrix((2, 2), rng), [])


def test_schmidt_of_bell():
    form = schmidt_decompose(bell_state(), ((0,), (1,)))
    np.testing.assert_allclose(form.coefficients, [2**-0.5, 2**-0.5], atol=1e-15)


def test_schmidt_of_product(rng):
    psi = tensor_product(random_pure_state((2,), rng), random_pure_state((3,), rng))
    form = schmidt_decompose(psi)
    assert abs(form.coefficients[0] - 1) <= 1e-12
    np.testing.assert_allclose(form.coefficients[1:], 0, atol=1e-12)


def test_schmidt_reconstruction_3x4(rng):
    psi = random_pure_state((3, 4), rng)
    form = schmidt_decompose(psi)
    # rebuild sum_i lambda_i |i_1>|i_2> by explicit Kronecker products
    rebuilt = sum(l * np.kron(a, b) for l, a, b in zip(form.coefficients, form.left_basis, form.right_basis))
    assert np.max(np.abs(rebuilt - psi.amplitudes)) <= 1e-10


def test_schmidt_invariants_and_phase_convention(rng):
    psi = random_pure_state((2, 3, 2), rng)
    form = schmidt_decompose(psi, ((0, 2), (1,)))
    assert abs(np.sum(form.coefficients**2) - 1) <= 1e-9
    assert np.all(np.diff(form.coefficients) <= 0)
    for basis in (form.left_basis, form.right_basis):
        np.testing.assert_allclose(basis.conj() @ basis.T, np.eye(len(basis)), atol=1e-9)
    for vec in form.left_basis:
        top = vec[np.argmax(np.abs(vec))]
        assert abs(top.imag) <= 1e-12 and top.real >= 0
    assert np.max(np.abs(form.reconstruct().amplitudes - psi.amplitudes)) <= 1e-8


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_schmidt_coefficients_invariant_under_local_unitaries(seed):
    rng = np.random.default_rng(seed)
    psi = random_pure_state((2, 3), rng)
    u = np.kron(haar_unitary(2, rng), haar_unitary(3, rng))
    rotated = PureState(u @ psi.amplitudes, (2, 3))
    a = np.sort(schmidt_decompose(psi).coefficients)
    b = np.sort(schmidt_decompose(rotated).coefficients)
    assert np.max(np.abs(a - b)) <= 1e-8
    assert abs(np.sum(a**2) - 1) <= 1e-9


def test_purify_maximally_mixed_qubit():
    p = purify(DensityMatrix(np.eye(2) / 2, (2,)))
    form = schmidt_decompose(p.state, ((0,), (1,)))
    np.testing.assert_allclose(form.coefficients, [2**-0.5, 2**-0.5], atol=1e-12)


def test_purify_pure_state_uses_one_ancilla_level(rng):
    psi = random_pure_state((2, 2), rng)
    assert purify(psi.density()).ancilla_dim == 1


def test_purify_rank_two_round_trip(rng):
    rho = random_density_matrix((2, 2), rng, rank=2)
    p = purify(rho)
    assert p.ancilla_dim == 2
    assert np.max(np.abs(p.reduced().matrix - rho.matrix)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_purification_marginal_reproduces_state(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 5))
    rho = random_density_matrix((d,), rng, rank=int(rng.integers(1, d + 1)))
    assert np.max(np.abs(purify(rho).reduced().matrix - rho.matrix)) <= 1e-8


def test_psd_sqrt_examples(rng):
    np.testing.assert_allclose(psd_sqrt(DensityMatrix(np.eye(2) / 2, (2,))), np.eye(2) / np.sqrt(2), atol=1e-15)
    proj = np.diag([1.0, 0.0])
    np.testing.assert_allclose(psd_sqrt(DensityMatrix(proj, (2,))), proj, atol=1e-15)
    rho = random_density_matrix((4,), rng)
    root = psd_sqrt(rho)
    np.testing.assert_allclose(root, root.conj().T, atol=1e-14)
    assert np.max(np.abs(root @ root - rho.matrix)) <= 1e-9


def test_psd_sqrt_clamps_tiny_negatives_and_rejects_large_ones():
    root = psd_sqrt(np.diag([1.0, -1e-12]))
    np.testing.assert_allclose(root, np.diag([1.0, 0.0]))
    with pytest.raises(NotPSDError):
        psd_sqrt(np.diag([1.0, -1e-6]))


def test_conjugate_preserves_spectrum(rng):
    rho = random_density_matrix((2, 2), rng)
    out = conjugate(rho, haar_unitary(4, rng))
    np.testing.assert_allclose(np.linalg.eigvalsh(out.matrix), np.linalg.eigvalsh(rho.matrix), atol=1e-12)
