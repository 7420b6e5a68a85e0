import numpy as np
import pytest
from hypothesis import given, settings

from fidsep.core import (
    DensityMatrix,
    SignatureError,
    bell_state,
    conjugate,
    random_density_matrix,
    random_local_unitary,
    random_pure_state,
    tensor_product_dm,
    werner_state,
)
from fidsep.fidelity import psd_sqrt
from fidsep.pure import e_ge_pure
from fidsep.two_qubit import (
    bures_from_concurrence,
    bures_two_qubit,
    concurrence,
    e_ge_from_concurrence,
    e_ge_two_qubit,
    f_sep_from_concurrence,
    f_sep_two_qubit,
    two_qubit_report,
)

from conftest import seeds

SY = np.array([[0, -1j], [1j, 0]])


def hermitian_concurrence(rho):
    """Concurrence from the Hermitian form sqrt(sqrt(rho) rho~ sqrt(rho))."""
    root = psd_sqrt(rho.matrix)
    tilde = np.kron(SY, SY) @ rho.matrix.conj() @ np.kron(SY, SY)
    mu = np.sort(np.sqrt(np.clip(np.linalg.eigvalsh(root @ tilde @ root), 0, None)))[::-1]
    return max(0.0, mu[0] - mu[1] - mu[2] - mu[3])


def test_singlet_is_maximal():
    assert abs(concurrence(bell_state("psi-")) - 1) <= 1e-12


def test_product_states_have_zero_concurrence(rng):
    rho = tensor_product_dm(random_density_matrix((2,), rng), random_density_matrix((2,), rng))
    assert concurrence(rho) <= 1e-7


def test_werner_half():
    # mu spectrum for p = 0.5 is (5/8, 1/8, 1/8, 1/8)
    assert abs(concurrence(werner_state(0.5)) - 0.25) <= 1e-12
    assert abs(hermitian_concurrence(werner_state(0.5)) - 0.25) <= 1e-12


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_werner_family(p):
    assert abs(concurrence(werner_state(p)) - max(0.0, (3 * p - 1) / 2)) <= 1e-9


def test_wrong_signature():
    with pytest.raises(SignatureError):
        concurrence(DensityMatrix(np.eye(4) / 4, (4,)))
    with pytest.raises(SignatureError):
        f_sep_two_qubit(random_pure_state((2, 3), np.random.default_rng(0)))


@pytest.mark.parametrize(
    "c, e_ge, f_sep, e_b",
    [
        (1.0, 0.5, 0.5, 2 - np.sqrt(2)),
        (0.0, 0.0, 1.0, 0.0),
        (0.6, 0.1, 0.9, 2 - 2 * np.sqrt(0.9)),
    ],
)
def test_closed_forms(c, e_ge, f_sep, e_b):
    assert e_ge_from_concurrence(c) == pytest.approx(e_ge, abs=1e-12)
    assert f_sep_from_concurrence(c) == pytest.approx(f_sep, abs=1e-12)
    assert bures_from_concurrence(c) == pytest.approx(e_b, abs=1e-12)


def test_bures_singlet_value():
    assert abs(bures_two_qubit(bell_state("psi-")) - (2 - np.sqrt(2))) <= 1e-12


def test_report_fields(rng):
    rho = random_density_matrix((2, 2), rng, rank=2)
    rep = two_qubit_report(rho)
    assert rep.e_ge + rep.f_sep == 1.0
    assert abs(rep.e_ge - e_ge_two_qubit(rho)) <= 1e-15
    assert abs(rep.e_b - 2 * (1 - np.sqrt(rep.f_sep))) <= 1e-12


def test_closed_forms_are_monotone_in_concurrence():
    grid = np.linspace(0, 1, 101)
    assert np.all(np.diff([e_ge_from_concurrence(c) for c in grid]) >= 0)
    assert np.all(np.diff([bures_from_concurrence(c) for c in grid]) >= 0)
    assert np.all(np.diff([f_sep_from_concurrence(c) for c in grid]) <= 0)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_concurrence_matches_hermitian_form_and_is_lu_invariant(seed):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix((2, 2), rng, rank=int(rng.integers(1, 5)))
    c = concurrence(rho)
    assert abs(c - hermitian_concurrence(rho)) <= 1e-7
    assert abs(c - concurrence(conjugate(rho, random_local_unitary((2, 2), rng)))) <= 1e-9


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_pure_two_qubit_states_agree_with_schmidt_route(seed):
    psi = random_pure_state((2, 2), np.random.default_rng(seed))
    assert abs(e_ge_two_qubit(psi) - e_ge_pure(psi)) <= 1e-8
