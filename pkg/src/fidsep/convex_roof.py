"""Fidelity of separability for mixed states and the measures derived from it.

The fidelity of separability of ``rho`` equals the largest average
``sum_j p_j Lambda_max(psi_j)**2`` over pure-state decompositions
``{p_j, psi_j}`` of ``rho``, and the geometric measure is ``1 - F_sep``.

Decompositions with ``m`` branches are parametrized by an ``m x m`` unitary
``A`` acting on the zero-padded canonical purification: the rows of
``A^dag Psi`` are the unnormalized branches ``sqrt(p_j) psi_j``. Equivalently,
the columns ``a_j`` of ``A`` are orthonormal ancilla vectors and the objective is
``sum_j max_phi |<a_j (x) phi|psi>|**2``, the purification form in which the
mixing weights have been eliminated.

Two optimizers are provided:

``"polar"`` (default)
    Alternates exact product-state updates per branch with a polar-factor
    update of ``A``. For fixed product states the objective is a convex
    function of ``A``, so moving to the unitary that maximizes its
    linearization never decreases it; both half-steps are monotone.
``"geodesic"``
    Ascent of ``sum_j p_j Lambda_max(psi_j)**2`` along one-parameter unitary
    subgroups ``A exp(tX)``, with ``X`` built from finite-difference
    directional derivatives over a basis of anti-Hermitian generators and the
    step chosen by backtracking. Slower; kept as an independent route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .core import (
    RANK_CUTOFF,
    STATE_TOL,
    DensityMatrix,
    Purification,
    PureState,
    StateError,
    as_density,
    haar_unitary,
    purify,
)
from .pure import (
    ProductState,
    SolverOptions,
    best_product_approximation,
    lambda_max,
)

# branches lighter than this are dropped from reported decompositions
ZERO_WEIGHT = 1e-14


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Pure-state ensemble ``{p_i, psi_i}``."""

    weights: np.ndarray
    states: tuple[PureState, ...]

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if len(w) != len(self.states) or not len(w):
            raise StateError("weights and states must be nonempty and of equal length")
        if w.min() < 0 or abs(w.sum() - 1.0) > STATE_TOL:
            raise StateError("weights must be nonnegative and sum to 1")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", tuple(self.states))

    def matrix(self) -> np.ndarray:
        vecs = np.array([s.amplitudes for s in self.states])
        return (vecs.T * self.weights) @ vecs.conj()


@dataclass(frozen=True, eq=False)
class SeparableEnsemble:
    """Separable state ``sum_i q_i |phi_i><phi_i|`` with product ``phi_i``."""

    weights: np.ndarray
    branches: tuple[ProductState, ...]

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if len(w) != len(self.branches) or not len(w):
            raise StateError("weights and branches must be nonempty and of equal length")
        if w.min() < 0 or abs(w.sum() - 1.0) > STATE_TOL:
            raise StateError("weights must be nonnegative and sum to 1")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "branches", tuple(self.branches))

    def density(self) -> DensityMatrix:
        vecs = np.array([b.vector() for b in self.branches])
        mat = (vecs.T * self.weights) @ vecs.conj()
        mat = 0.5 * (mat + mat.conj().T)
        return DensityMatrix(mat / np.trace(mat).real, self.branches[0].dims)


@dataclass(frozen=True)
class Diagnostics:
    restarts: int
    iterations: int
    converged: bool
    branches: int
    method: str


@dataclass(frozen=True, eq=False)
class MeasureReport:
    f_sep: float
    e_ge: float
    e_rge: float
    e_gr: float
    e_b: float
    best_decomposition: Decomposition
    closest_separable: SeparableEnsemble
    diagnostics: Diagnostics


@dataclass(frozen=True)
class RoofOptions:
    branches: int | None = None
    restarts: int = 10
    max_iter: int = 3000
    tol: float = 1e-13
    seed: int = 42
    method: str = "polar"
    inner: SolverOptions = field(default_factory=SolverOptions)


def measures_from_f_sep(f_sep: float) -> dict[str, float]:
    """Geometric, revised geometric, Groverian and Bures measures from ``F_sep``."""
    f = float(min(1.0, max(0.0, f_sep)))
    e = 1.0 - f
    return {"f_sep": f, "e_ge": e, "e_rge": e, "e_gr": float(np.sqrt(e)), "e_b": 2.0 * (1.0 - float(np.sqrt(f)))}


# -- building blocks ---------------------------------------------------------


def decomposition_from_unitary(eigvals, eigvecs, u) -> Decomposition:
    """Ensemble ``sqrt(p_j) psi_j = sum_i u[j, i] sqrt(q_i) phi_i``.

    ``eigvals``/``eigvecs`` are the ``r`` nonzero eigenpairs of ``rho`` (vectors
    as columns); ``u`` is an ``m x r`` isometry, ``m >= r``. Dims default to one
    subsystem; use :func:`decomposition_for` to keep a signature.
    """
    return _decomposition(eigvals, eigvecs, u, (np.asarray(eigvecs).shape[0],))


def decomposition_for(rho: DensityMatrix, u: np.ndarray) -> Decomposition:
    vals, vecs = rho.eigh()
    r = int(np.sum(vals > RANK_CUTOFF))
    return _decomposition(vals[:r], vecs[:, :r], u, rho.dims)


def _decomposition(eigvals, eigvecs, u, dims) -> Decomposition:
    q = np.asarray(eigvals, dtype=float)
    vecs = np.asarray(eigvecs, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[1] != q.size or u.shape[0] < q.size:
        raise ValueError(f"u must be m x {q.size} with m >= {q.size}, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(q.size))) > STATE_TOL:
        raise ValueError("u is not an isometry (u^dag u != 1)")
    branches = u @ (np.sqrt(q)[:, None] * vecs.T)
    return _ensemble_from_rows(branches, dims)


def _ensemble_from_rows(rows: np.ndarray, dims) -> Decomposition:
    weights = np.sum(np.abs(rows) ** 2, axis=1)
    keep = weights >= ZERO_WEIGHT
    rows, weights = rows[keep], weights[keep]
    states = tuple(PureState(r / np.linalg.norm(r), dims) for r in rows)
    return Decomposition(weights / weights.sum(), states)


def optimal_ancilla_weights(overlaps: Sequence[float]) -> np.ndarray:
    """Weights ``q_i = o_i**2 / sum_k o_k**2`` maximizing ``(sum_i sqrt(q_i) o_i)**2``.

    The maximum equals ``sum_i o_i**2``.
    """
    o = np.abs(np.asarray(overlaps, dtype=float))
    total = np.sum(o**2)
    if o.size == 0 or total == 0:
        raise ValueError("at least one overlap must be positive")
    return o**2 / total


def weighted_overlap(weights: Sequence[float], overlaps: Sequence[float]) -> float:
    """``(sum_i sqrt(q_i) o_i)**2``: phase-aligned overlap of a purification with weights ``q``."""
    return float(np.sum(np.sqrt(np.asarray(weights)) * np.abs(overlaps)) ** 2)


def purified_overlap(
    psi: Purification,
    branches: Sequence[ProductState],
    ancilla_vectors: Sequence[np.ndarray],
) -> float:
    """``sum_i |<psi|a_i (x) phi_i>|**2`` for orthonormal ancilla vectors ``a_i``.

    This is the best overlap of ``psi`` with a purification of the separable
    state built from ``branches`` once weights and phases are optimized. Ancilla
    vectors longer than the purification's ancilla see it zero-padded.
    """
    a = np.array([np.asarray(v, dtype=complex).ravel() for v in ancilla_vectors])
    if len(a) != len(branches):
        raise ValueError("need one ancilla vector per branch")
    if np.max(np.abs(a.conj() @ a.T - np.eye(len(a)))) > STATE_TOL:
        raise ValueError("ancilla vectors are not orthonormal")
    coeffs = psi.coefficient_matrix()
    if a.shape[1] < coeffs.shape[0]:
        raise ValueError("ancilla vectors are shorter than the purification's ancilla")
    coeffs = np.pad(coeffs, ((0, a.shape[1] - coeffs.shape[0]), (0, 0)))
    total = 0.0
    for vec, branch in zip(a, branches):
        total += abs(np.vdot(np.kron(vec, branch.vector()), coeffs.ravel())) ** 2
    return float(total)


# -- optimizers ---------------------------------------------------------------


class _Problem:
    """Padded purification of ``rho`` and per-branch product search."""

    def __init__(self, rho: DensityMatrix, m: int, inner: SolverOptions):
        self.dims = rho.dims
        coeffs = purify(rho).coefficient_matrix()
        self.rank = coeffs.shape[0]
        self.m = m
        self.psi = np.pad(coeffs, ((0, m - self.rank), (0, 0)))
        self.inner = inner

    def branches(self, a: np.ndarray) -> np.ndarray:
        return a.conj().T @ self.psi

    def products(self, rows: np.ndarray, prev=None):
        """Best product state per branch; returns (factor lists, product vectors, overlaps)."""
        dims = self.dims
        if len(dims) == 2:
            u, s, vh = np.linalg.svd(rows.reshape(len(rows), *dims))
            left, right = u[:, :, 0], vh[:, 0, :]
            vecs = (left[:, :, None] * right[:, None, :]).reshape(len(rows), -1)
            factors = [[l, r] for l, r in zip(left, right)]
            return factors, vecs, s[:, 0].astype(complex)
        factors, vecs, overlaps = [], [], []
        for j, row in enumerate(rows):
            start = None if prev is None else prev[j]
            if start is None and len(dims) > 2 and np.linalg.norm(row) > 0:
                start = list(lambda_max(PureState.from_vector(row, dims), self.inner).argmax.factors)
            f, c = best_product_approximation(row, dims, start)
            factors.append(f)
            vec = f[0]
            for g in f[1:]:
                vec = np.kron(vec, g)
            vecs.append(vec)
            overlaps.append(c)
        return factors, np.array(vecs), np.array(overlaps)

    def objective(self, a: np.ndarray, prev=None):
        factors, vecs, c = self.products(self.branches(a), prev)
        return float(np.sum(np.abs(c) ** 2)), factors, vecs, c


def _polar(mat: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(mat)
    return w @ vh


def _run_polar(problem: _Problem, a: np.ndarray, max_iter: int, tol: float):
    value, factors, vecs, c = problem.objective(a)
    it, converged = 0, False
    for it in range(1, max_iter + 1):
        # w_j = Psi conj(phi_j); gradient column j is w_j conj(c_j)
        grad = (problem.psi @ vecs.conj().T) * c.conj()[None, :]
        a_new = _polar(grad)
        new_value, new_factors, new_vecs, new_c = problem.objective(a_new, factors)
        if new_value < value:
            converged = True
            break
        gain = new_value - value
        a, value, factors, vecs, c = a_new, new_value, new_factors, new_vecs, new_c
        if gain < tol:
            converged = True
            break
    return a, value, factors, c, it, converged


def _generators(m: int) -> list[np.ndarray]:
    gens = []
    for i in range(m):
        x = np.zeros((m, m), dtype=complex)
        x[i, i] = 1j
        gens.append(x)
        for k in range(i + 1, m):
            x = np.zeros((m, m), dtype=complex)
            x[i, k], x[k, i] = 1 / np.sqrt(2), -1 / np.sqrt(2)
            gens.append(x)
            y = np.zeros((m, m), dtype=complex)
            y[i, k] = y[k, i] = 1j / np.sqrt(2)
            gens.append(y)
    return gens


def _run_geodesic(problem: _Problem, a: np.ndarray, max_iter: int, tol: float, h: float = 1e-6):
    gens = _generators(problem.m)
    value, factors, _, c = problem.objective(a)
    it, converged, step = 0, False, 1.0
    for it in range(1, max_iter + 1):
        slopes = np.empty(len(gens))
        for k, x in enumerate(gens):
            fwd = problem.objective(a @ expm(h * x), factors)[0]
            bwd = problem.objective(a @ expm(-h * x), factors)[0]
            slopes[k] = (fwd - bwd) / (2 * h)
        slope_sq = float(slopes @ slopes)
        if slope_sq < tol:
            converged = True
            break
        direction = sum(s * x for s, x in zip(slopes, gens))
        step = min(1.0, 4 * step)
        while step > 1e-12:
            trial = a @ expm(step * direction)
            t_value, t_factors, _, t_c = problem.objective(trial, factors)
            if t_value >= value + 1e-4 * step * slope_sq:
                break
            step /= 2
        else:
            converged = True
            break
        gain = t_value - value
        # re-orthonormalize to stop drift off the unitary group
        a, value, factors, c = _polar(trial), t_value, t_factors, t_c
        if gain < tol:
            converged = True
            break
    return a, value, factors, c, it, converged


def _solve(rho: DensityMatrix, m: int, opts: RoofOptions, memo: dict):
    if m in memo:
        return memo[m]
    problem = _Problem(rho, m, opts.inner)
    run = {"polar": _run_polar, "geodesic": _run_geodesic}[opts.method]
    starts = [haar_unitary(m, np.random.default_rng([opts.seed, r])) for r in range(max(1, opts.restarts))]
    if m > problem.rank:
        # warm start from the best (m-1)-branch solution keeps results monotone in m
        smaller = _solve(rho, m - 1, opts, memo)[0]
        embedded = np.eye(m, dtype=complex)
        embedded[: m - 1, : m - 1] = smaller
        starts.append(embedded)
    best, iterations = None, 0
    for a0 in starts:
        a, value, factors, c, it, converged = run(problem, a0, opts.max_iter, opts.tol)
        iterations += it
        if best is None or value > best[1]:
            best = (a, value, factors, c, converged)
    memo[m] = best[0], best, iterations, len(starts), problem
    return memo[m]


def _refine_branch_values(problem: _Problem, rows, factors, c, inner: SolverOptions):
    """Per-branch overlaps, upgraded by a full restart search on three or more parties."""
    if len(problem.dims) <= 2:
        return factors, c
    factors, c = list(factors), np.array(c)
    for j, row in enumerate(rows):
        norm = np.linalg.norm(row)
        if norm < np.sqrt(ZERO_WEIGHT):
            continue
        res = lambda_max(PureState.from_vector(row, problem.dims), inner)
        if res.lambda_max * norm > abs(c[j]):
            factors[j] = list(res.argmax.factors)
            c[j] = res.lambda_max * norm
    return factors, c


def default_branches(rho: DensityMatrix) -> int:
    """``min(rank**2, max(rank, dim))``.

    Rank-many branches are not always enough: some rank-3 separable two-qubit
    states only split into four product states.
    """
    rank = max(1, rho.rank())
    return min(rank * rank, max(rank, rho.dim))


def f_sep_mixed(rho: DensityMatrix | PureState, opts: RoofOptions | None = None) -> MeasureReport:
    """Fidelity of separability by optimizing over pure-state decompositions.

    The reported value is achieved by the returned decomposition, so it is a
    lower bound on the true optimum. ``closest_separable`` mixes the branch
    maximizers with weights proportional to ``p_j Lambda_j**2``; its fidelity
    with ``rho`` is at least the reported value.
    """
    opts = opts or RoofOptions()
    rho = as_density(rho)
    rank = max(1, rho.rank())
    m = default_branches(rho) if opts.branches is None else int(opts.branches)
    if not rank <= m <= rank * rank:
        raise ValueError(f"branch count must lie in [{rank}, {rank * rank}], got {m}")
    if opts.method not in ("polar", "geodesic"):
        raise ValueError(f"unknown method {opts.method!r}")

    memo: dict = {}
    _, (a, _, factors, c, converged), _, _, problem = _solve(rho, m, opts, memo)
    iterations = sum(entry[2] for entry in memo.values())
    restarts = sum(entry[3] for entry in memo.values())

    rows = problem.branches(a)
    factors, c = _refine_branch_values(problem, rows, factors, c, opts.inner)
    overlaps_sq = np.abs(c) ** 2
    f_sep = float(np.sum(overlaps_sq))

    decomposition = _ensemble_from_rows(rows, rho.dims)
    keep = overlaps_sq >= ZERO_WEIGHT
    separable = SeparableEnsemble(
        optimal_ancilla_weights(np.sqrt(overlaps_sq[keep])),
        tuple(ProductState(tuple(f)) for f, k in zip(factors, keep) if k),
    )
    diag = Diagnostics(restarts, iterations, bool(converged), m, opts.method)
    return MeasureReport(
        **measures_from_f_sep(f_sep),
        best_decomposition=decomposition,
        closest_separable=separable,
        diagnostics=diag,
    )


def entanglement_report(
    state: DensityMatrix | PureState,
    opts: RoofOptions | None = None,
) -> MeasureReport:
    """All fidelity-based measures for a pure or mixed state.

    Pure inputs skip the decomposition search and use :func:`lambda_max`
    directly with ``opts.inner``.
    """
    opts = opts or RoofOptions()
    if not isinstance(state, PureState):
        return f_sep_mixed(state, opts)
    res = lambda_max(state, opts.inner)
    return MeasureReport(
        **measures_from_f_sep(res.lambda_max**2),
        best_decomposition=Decomposition(np.ones(1), (state,)),
        closest_separable=SeparableEnsemble(np.ones(1), (res.argmax,)),
        diagnostics=Diagnostics(res.restarts_used, res.iterations, res.converged, 1, "pure"),
    )
