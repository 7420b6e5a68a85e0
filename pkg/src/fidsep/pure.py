"""Maximal product-state overlap of pure states and the pure-state measures.

For bipartite states the answer is the largest Schmidt coefficient. For three or
more parties there is no closed form; :func:`lambda_max` runs an alternating
ascent (higher-order power iteration) from several Haar-random starts. Every
sweep maximizes the overlap exactly in one factor at a time, so the overlap is
nondecreasing and the result is a certified lower bound on the true value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    STATE_TOL,
    PureState,
    StateError,
    random_unit_vector,
    schmidt_decompose,
)


@dataclass(frozen=True, eq=False)
class ProductState:
    """Tensor product of per-subsystem unit vectors."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        factors = []
        for f in self.factors:
            f = np.array(f, dtype=complex).ravel()
            if abs(np.linalg.norm(f) - 1.0) > STATE_TOL:
                raise StateError("product-state factors must be unit vectors")
            f.flags.writeable = False
            factors.append(f)
        if not factors:
            raise StateError("a product state needs at least one factor")
        object.__setattr__(self, "factors", tuple(factors))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.size for f in self.factors)

    def vector(self) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for f in self.factors:
            out = np.kron(out, f)
        return out

    def state(self) -> PureState:
        return PureState(self.vector(), self.dims)


@dataclass(frozen=True)
class SolverOptions:
    restarts: int = 20
    max_iter: int = 1000
    tol: float = 1e-10
    seed: int = 42


@dataclass(frozen=True, eq=False)
class LambdaResult:
    lambda_max: float
    argmax: ProductState
    iterations: int
    restarts_used: int
    converged: bool
    history: tuple[float, ...] = field(default=(), repr=False)


def contract_except(tensor: np.ndarray, factors: Sequence[np.ndarray], k: int) -> np.ndarray:
    """Contract ``tensor`` with the conjugates of every factor except number ``k``."""
    t = tensor
    # contract from the last axis down so earlier axis numbers stay valid
    for j in reversed(range(len(factors))):
        if j != k:
            t = np.tensordot(t, factors[j].conj(), axes=([j], [0]))
    return t


def alternating_ascent(
    tensor: np.ndarray,
    factors: Sequence[np.ndarray],
    max_iter: int = 1000,
    tol: float = 1e-10,
):
    """Cyclic single-factor maximization of ``|<phi_1 ... phi_n|tensor>|``.

    ``tensor`` need not be normalized. Returns ``(factors, overlap, sweeps,
    converged, history)``, where ``history`` holds the overlap after each sweep.
    """
    factors = [np.asarray(f, dtype=complex) for f in factors]
    n = len(factors)
    overlap = 0.0
    history = []
    converged = False
    sweeps = 0
    current = 0.0
    for sweeps in range(1, max_iter + 1):
        for k in range(n):
            v = contract_except(tensor, factors, k)
            norm = np.linalg.norm(v)
            if norm == 0.0:
                continue
            factors[k] = v / norm
            current = norm
        previous, overlap = overlap, float(current)
        history.append(overlap)
        if sweeps > 1 and abs(overlap - previous) < tol:
            converged = True
            break
    return factors, overlap, sweeps, converged, history


def _product_overlap(psi: PureState, product: ProductState) -> float:
    return float(abs(np.vdot(product.vector(), psi.amplitudes)))


def lambda_max_bipartite(psi: PureState, cut=None) -> LambdaResult:
    """Largest Schmidt coefficient across ``cut`` with its product maximizer.

    The maximizer's two factors live on the left and right groups of the cut
    (each group's subsystems in the listed order).
    """
    form = schmidt_decompose(psi, cut)
    top = float(form.coefficients[0])
    argmax = ProductState((form.left_basis[0], form.right_basis[0]))
    return LambdaResult(min(top, 1.0), argmax, 1, 1, True, (top,))


def lambda_max(psi: PureState, opts: SolverOptions | None = None) -> LambdaResult:
    """Maximal overlap ``max |<phi|psi>|`` over product states ``phi``.

    Two-party inputs are solved exactly through the Schmidt decomposition;
    anything larger goes to :func:`lambda_max_ascent`.
    """
    n = len(psi.dims)
    if n == 1:
        return LambdaResult(1.0, ProductState((psi.amplitudes,)), 0, 0, True, (1.0,))
    if n == 2:
        return lambda_max_bipartite(psi, ((0,), (1,)))
    return lambda_max_ascent(psi, opts)


def lambda_max_ascent(psi: PureState, opts: SolverOptions | None = None) -> LambdaResult:
    """Restarted alternating ascent for any number of parties.

    Restart ``r`` draws Haar-random factors from ``default_rng([seed, r])`` and
    ascends until the overlap improves by less than ``tol`` per sweep. The best
    restart wins; ties go to the earliest. ``converged`` is false only when no
    restart met the tolerance within ``max_iter`` sweeps.
    """
    opts = opts or SolverOptions()
    tensor = psi.tensor()
    best = None
    iterations = 0
    any_converged = False
    restarts = max(1, opts.restarts)
    for r in range(restarts):
        rng = np.random.default_rng([opts.seed, r])
        start = [random_unit_vector(d, rng) for d in psi.dims]
        factors, overlap, sweeps, converged, history = alternating_ascent(
            tensor, start, opts.max_iter, opts.tol
        )
        iterations += sweeps
        any_converged |= converged
        if best is None or overlap > best[1]:
            best = (factors, overlap, history)
    factors, _, history = best
    product = ProductState(tuple(factors))
    value = min(_product_overlap(psi, product), 1.0)
    return LambdaResult(value, product, iterations, restarts, any_converged, tuple(history))


def f_sep_pure(psi: PureState, opts: SolverOptions | None = None) -> float:
    """Fidelity of separability of a pure state, the squared maximal product overlap."""
    return lambda_max(psi, opts).lambda_max ** 2


def e_ge_pure(psi: PureState, opts: SolverOptions | None = None) -> float:
    return 1.0 - f_sep_pure(psi, opts)


def best_product_approximation(
    vec: np.ndarray,
    dims: Sequence[int],
    start: Sequence[np.ndarray] | None = None,
    max_iter: int = 200,
    tol: float = 1e-12,
) -> tuple[list[np.ndarray], complex]:
    """Closest product direction to an unnormalized vector.

    Returns factors and the complex overlap ``<phi|vec>``. Two parties are
    solved by SVD; more parties run an alternating ascent, warm-started from
    ``start`` when given.
    """
    dims = tuple(dims)
    if len(dims) == 1:
        norm = np.linalg.norm(vec)
        f = vec / norm if norm > 0 else np.eye(dims[0], 1, dtype=complex).ravel()
        return [f], complex(np.vdot(f, vec))
    if len(dims) == 2:
        u, s, vh = np.linalg.svd(vec.reshape(dims))
        factors = [u[:, 0], vh[0]]
    else:
        if start is None:
            start = [np.eye(d, 1, dtype=complex).ravel() for d in dims]
        factors, *_ = alternating_ascent(vec.reshape(dims), start, max_iter, tol)
    phi = factors[0]
    for f in factors[1:]:
        phi = np.kron(phi, f)
    return list(factors), complex(np.vdot(phi, vec))


def hermitian_overlap_bound(h: np.ndarray, a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """``(|<a|H|b>|, max_i |eig_i(H)|)`` for Hermitian ``H`` and unit ``a``, ``b``."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"H must be square, got shape {h.shape}")
    if np.max(np.abs(h - h.conj().T)) > STATE_TOL:
        raise ValueError("H is not Hermitian")
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    for v in (a, b):
        if abs(np.linalg.norm(v) - 1.0) > STATE_TOL:
            raise ValueError("a and b must be unit vectors")
    value = float(abs(a.conj() @ h @ b))
    bound = float(np.max(np.abs(np.linalg.eigvalsh(h))))
    return value, bound


def computational_floor(psi: PureState) -> float:
    """Best overlap with a computational-basis product state."""
    return float(np.max(np.abs(psi.amplitudes)))
