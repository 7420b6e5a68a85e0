import numpy as np
import pytest
from hypothesis import given, settings

from fidsep.core import (
    PureState,
    bell_state,
    ghz_state,
    random_local_unitary,
    random_pure_state,
    random_unit_vector,
    tensor_product,
    w_state,
)
from fidsep.oracle import brute_lambda_max
from fidsep.pure import (
    ProductState,
    SolverOptions,
    alternating_ascent,
    computational_floor,
    e_ge_pure,
    f_sep_pure,
    hermitian_overlap_bound,
    lambda_max,
    lambda_max_ascent,
    lambda_max_bipartite,
)

from conftest import seeds

# oracle values: brute_lambda_max(state, 10_000, seed=0) ** 2, frozen
GHZ3_ORACLE = 0.5000000000000001
W3_ORACLE = 0.444444444444445


def _overlap(result, psi):
    return abs(np.vdot(result.argmax.vector(), psi.amplitudes))


@pytest.mark.parametrize("dims", [(2, 2), (2, 3, 2), (3, 2, 2, 2)])
def test_product_state_has_unit_overlap(rng, dims):
    psi = PureState(ProductState(tuple(random_unit_vector(d, rng) for d in dims)).vector(), dims)
    assert abs(lambda_max(psi).lambda_max - 1) <= 1e-9


def test_bell_state():
    res = lambda_max(bell_state())
    assert abs(res.lambda_max - 2**-0.5) <= 1e-12
    assert res.converged


def test_ghz_and_w_match_oracle():
    assert abs(lambda_max(ghz_state()).lambda_max ** 2 - GHZ3_ORACLE) <= 1e-6
    assert abs(lambda_max(w_state()).lambda_max ** 2 - W3_ORACLE) <= 1e-6
    assert abs(lambda_max(ghz_state()).lambda_max - 2**-0.5) <= 1e-6


def test_frozen_oracle_values_reproduce():
    assert abs(brute_lambda_max(w_state(), 10_000, seed=0) ** 2 - W3_ORACLE) <= 1e-12


def test_bipartite_bell_argmax_is_first_schmidt_pair():
    res = lambda_max_bipartite(bell_state(), ((0,), (1,)))
    assert abs(res.lambda_max - 2**-0.5) <= 1e-12
    # stable tie-break picks |00> up to a phase
    assert abs(abs(res.argmax.vector()[0]) - 1) <= 1e-12


def test_bipartite_unequal_schmidt_coefficients():
    psi = PureState(np.array([np.sqrt(0.9), 0, 0, np.sqrt(0.1)]), (2, 2))
    assert abs(lambda_max_bipartite(psi).lambda_max - np.sqrt(0.9)) <= 1e-12


def test_bipartite_random_3x3_matches_ascent(rng):
    psi = random_pure_state((3, 3), rng)
    exact = lambda_max_bipartite(psi).lambda_max
    assert abs(lambda_max_ascent(psi).lambda_max - exact) <= 1e-8


def test_bipartite_cut_of_three_parties(rng):
    psi = random_pure_state((2, 2, 3), rng)
    res = lambda_max_bipartite(psi, ((0, 2), (1,)))
    assert res.argmax.dims == (6, 2)
    grouped = psi.tensor().transpose(0, 2, 1).ravel()
    assert abs(abs(np.vdot(res.argmax.vector(), grouped)) - res.lambda_max) <= 1e-9
    # a coarser cut can only raise the overlap
    assert res.lambda_max >= lambda_max(psi).lambda_max - 1e-9


def test_f_sep_and_e_ge_pure():
    product = tensor_product(bell_state(), PureState(np.array([1.0, 0]), (2,)))
    assert abs(f_sep_pure(PureState(np.array([1.0, 0, 0, 0]), (2, 2))) - 1) <= 1e-12
    assert abs(f_sep_pure(bell_state()) - 0.5) <= 1e-12
    assert abs(e_ge_pure(bell_state()) - 0.5) <= 1e-12
    assert abs(f_sep_pure(w_state()) - W3_ORACLE) <= 1e-6
    assert abs(e_ge_pure(ghz_state()) - 0.5) <= 1e-6
    assert abs(e_ge_pure(PureState(np.array([1.0, 0, 0, 0]), (2, 2)))) <= 1e-12
    assert e_ge_pure(product) == pytest.approx(0.5, abs=1e-9)
    assert f_sep_pure(w_state()) + e_ge_pure(w_state()) == 1.0


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 2), (3, 3)])
def test_argmax_realizes_reported_value(rng, dims):
    psi = random_pure_state(dims, rng)
    res = lambda_max(psi)
    assert abs(_overlap(res, psi) - res.lambda_max) <= 1e-9


def test_ascent_is_monotone_per_sweep(rng):
    psi = random_pure_state((3, 2, 3, 2), rng)
    start = [random_unit_vector(d, rng) for d in psi.dims]
    *_, history = alternating_ascent(psi.tensor(), start, max_iter=300, tol=0.0)
    assert np.all(np.diff(history) >= -1e-12)


def test_ascent_reports_non_convergence(rng):
    psi = random_pure_state((2, 2, 2), rng)
    res = lambda_max(psi, SolverOptions(restarts=2, max_iter=3, tol=0.0))
    assert not res.converged
    assert res.lambda_max > 0


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    psi = random_pure_state((2, 2, 2), rng)
    rotated = PureState(random_local_unitary(psi.dims, rng) @ psi.amplitudes, psi.dims)
    assert abs(lambda_max(psi).lambda_max - lambda_max(rotated).lambda_max) <= 1e-6


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_lambda_max_floor(seed):
    rng = np.random.default_rng(seed)
    dims = ((2, 2, 2), (2, 3, 2), (3, 4))[seed % 3]
    psi = random_pure_state(dims, rng)
    value = lambda_max(psi).lambda_max
    assert value >= computational_floor(psi) - 1e-12
    assert value >= 1 / np.sqrt(psi.dim) - 1e-12


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_bipartite_routes_agree(seed):
    rng = np.random.default_rng(seed)
    dims = tuple(int(d) for d in rng.integers(2, 5, size=2))
    psi = random_pure_state(dims, rng)
    assert abs(lambda_max(psi).lambda_max - lambda_max_ascent(psi).lambda_max) <= 1e-8


def test_hermitian_bound_examples(rng):
    a, b = random_unit_vector(4, rng), random_unit_vector(4, rng)
    value, bound = hermitian_overlap_bound(np.eye(4), a, b)
    assert abs(value - abs(np.vdot(a, b))) <= 1e-12 and bound == 1.0
    g = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    h = g + g.conj().T
    vals, vecs = np.linalg.eigh(h)
    top = vecs[:, np.argmax(np.abs(vals))]
    value, bound = hermitian_overlap_bound(h, top, top)
    assert abs(value - bound) <= 1e-10


def test_hermitian_bound_rejects_non_hermitian(rng):
    with pytest.raises(ValueError):
        hermitian_overlap_bound(np.array([[0, 1], [0, 0]]), np.array([1, 0]), np.array([0, 1]))


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_hermitian_bound_never_violated(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 9))
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    value, bound = hermitian_overlap_bound(g + g.conj().T, random_unit_vector(d, rng), random_unit_vector(d, rng))
    assert value <= bound + 1e-12
