"""Dense complex state primitives: validated states, tensor products, partial
traces, Schmidt decomposition, purification and random state generation.

Subsystems are indexed from 0. A state over dims ``(d0, d1, ..., dn-1)`` stores
amplitudes (or matrix rows/columns) in row-major order, with subsystem 0 the
most significant index, i.e. ``|i0 i1 ...> = |i0> (x) |i1> (x) ...``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

# validation tolerance for norms, traces, Hermiticity and PSD checks
STATE_TOL = 1e-9
# eigenvalues at or below this count as zero when determining rank
RANK_CUTOFF = 1e-12
# eigenvalues below this are treated as round-off when taking square roots
SQRT_NOISE_FLOOR = 1e-14


class StateError(ValueError):
    """A state violates its normalization, Hermiticity or positivity constraints."""


class SignatureError(ValueError):
    """Subsystem dimensions are inconsistent with the data or with each other."""


class NotPSDError(StateError):
    """A matrix has an eigenvalue below the allowed negative tolerance."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.flags.writeable = False
    return arr


def check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise SignatureError("at least one subsystem is required")
    if any(d < 1 for d in dims):
        raise SignatureError(f"subsystem dimensions must be >= 1, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector with explicit subsystem dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = check_dims(self.dims)
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size != prod(dims):
            raise SignatureError(
                f"{amps.size} amplitudes do not match dims {dims} (product {prod(dims)})"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > STATE_TOL:
            raise StateError(f"state norm is {norm:.12g}, expected 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec, dims=None) -> "PureState":
        """Normalize ``vec`` and wrap it; ``dims`` defaults to a single subsystem."""
        vec = np.asarray(vec, dtype=complex).ravel()
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise StateError("cannot normalize the zero vector")
        return cls(vec / norm, tuple(dims) if dims is not None else (vec.size,))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix with subsystem dimensions."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = check_dims(self.dims)
        mat = _frozen(self.matrix)
        n = prod(dims)
        if mat.shape != (n, n):
            raise SignatureError(f"matrix shape {mat.shape} does not match dims {dims}")
        herm_dev = np.max(np.abs(mat - mat.conj().T)) if n else 0.0
        if herm_dev > STATE_TOL:
            raise StateError(f"matrix is not Hermitian (max deviation {herm_dev:.3g})")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > STATE_TOL:
            raise StateError(f"trace is {tr:.12g}, expected 1")
        lo = np.linalg.eigvalsh(mat).min()
        if lo < -STATE_TOL:
            raise NotPSDError(f"smallest eigenvalue {lo:.3g} is below -{STATE_TOL}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (descending, clamped at 0) and matching eigenvector columns."""
        vals, vecs = np.linalg.eigh(self.matrix)
        order = np.argsort(-vals, kind="stable")
        return np.clip(vals[order], 0.0, None), vecs[:, order]

    def rank(self, cutoff: float = RANK_CUTOFF) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > cutoff))


def as_density(state: PureState | DensityMatrix) -> DensityMatrix:
    return state.density() if isinstance(state, PureState) else state


def tensor_product(a: PureState, b: PureState) -> PureState:
    return PureState(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)


def tensor_product_dm(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(np.kron(a.matrix, b.matrix), a.dims + b.dims)


def _check_indices(indices: Iterable[int], n: int) -> tuple[int, ...]:
    indices = tuple(int(i) for i in indices)
    for i in indices:
        if not 0 <= i < n:
            raise SignatureError(f"subsystem index {i} out of range for {n} subsystems")
    if len(set(indices)) != len(indices):
        raise SignatureError(f"repeated subsystem index in {indices}")
    return indices


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not in ``keep``.

    The kept subsystems appear in the output in the order given by ``keep``.
    """
    n = len(rho.dims)
    keep = _check_indices(keep, n)
    if not keep:
        raise SignatureError("keep must name at least one subsystem")
    drop = [i for i in range(n) if i not in keep]
    t = rho.matrix.reshape(rho.dims + rho.dims)
    # bra axes are offset by n
    perm = list(keep) + drop + [n + i for i in keep] + [n + i for i in drop]
    t = t.transpose(perm)
    dk = prod(rho.dims[i] for i in keep)
    dd = prod(rho.dims[i] for i in drop)
    t = t.reshape(dk, dd, dk, dd)
    out = np.einsum("ajbj->ab", t)
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(out, tuple(rho.dims[i] for i in keep))


def normalize_cut(cut, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Validate a bipartition given as ``(left, right)`` or just ``left``."""
    if cut is None:
        cut = ((0,), tuple(range(1, n)))
    left, right = cut if len(cut) == 2 and not isinstance(cut[0], (int, np.integer)) else (cut, None)
    left = _check_indices(left, n)
    if right is None:
        right = tuple(i for i in range(n) if i not in left)
    right = _check_indices(right, n)
    if not left or not right:
        raise SignatureError("both sides of a cut must be nonempty")
    if set(left) & set(right) or len(left) + len(right) != n:
        raise SignatureError(f"cut {left}|{right} is not a bipartition of {n} subsystems")
    return left, right


def bipartite_matrix(psi: PureState, cut) -> tuple[np.ndarray, tuple, tuple]:
    """Reshape ``psi`` into a (left group) x (right group) coefficient matrix."""
    left, right = normalize_cut(cut, len(psi.dims))
    dl = prod(psi.dims[i] for i in left)
    dr = prod(psi.dims[i] for i in right)
    mat = psi.tensor().transpose(left + right).reshape(dl, dr)
    return mat, left, right


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """``psi = sum_i coefficients[i] |left_basis[i]> |right_basis[i]>`` across ``cut``.

    Basis vectors are rows of ``left_basis`` / ``right_basis``; each lives on the
    tensor product of its side's subsystems, in the order listed in ``cut``.
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    cut: tuple[tuple[int, ...], tuple[int, ...]]
    dims: tuple[int, ...]

    def reconstruct(self) -> PureState:
        left, right = self.cut
        mat = np.einsum("i,ia,ib->ab", self.coefficients, self.left_basis, self.right_basis)
        t = mat.reshape(tuple(self.dims[i] for i in left + right))
        t = t.transpose(np.argsort(left + right))
        return PureState(t.ravel(), self.dims)


def schmidt_decompose(psi: PureState, cut=None) -> SchmidtForm:
    """Schmidt decomposition across a bipartition of the subsystems.

    Coefficients come out nonincreasing (ties keep the SVD order) and each left
    vector is rephased so its largest-magnitude entry is real and nonnegative.
    """
    mat, left, right = bipartite_matrix(psi, cut)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    order = np.argsort(-s, kind="stable")
    s, u, vh = s[order], u[:, order], vh[order]
    lvecs = u.T.copy()
    rvecs = vh.copy()
    for i, vec in enumerate(lvecs):
        k = int(np.argmax(np.abs(vec)))
        if abs(vec[k]) > 0:
            phase = vec[k] / abs(vec[k])
            lvecs[i] = vec * phase.conjugate()
            rvecs[i] = rvecs[i] * phase
    return SchmidtForm(s, lvecs, rvecs, (left, right), psi.dims)


@dataclass(frozen=True, eq=False)
class Purification:
    """Pure state on ancilla (x) system whose ancilla marginal is traced away."""

    state: PureState
    ancilla_dim: int
    system_dims: tuple[int, ...]

    def coefficient_matrix(self) -> np.ndarray:
        """Amplitudes as an (ancilla_dim x system_dim) matrix."""
        return self.state.amplitudes.reshape(self.ancilla_dim, -1)

    def reduced(self) -> DensityMatrix:
        return partial_trace(self.state.density(), range(1, 1 + len(self.system_dims)))


def purify(rho: DensityMatrix) -> Purification:
    """Canonical purification ``sum_i sqrt(q_i) |i> (x) |phi_i>`` from the eigenpairs of ``rho``."""
    vals, vecs = rho.eigh()
    r = max(1, int(np.sum(vals > RANK_CUTOFF)))
    vals, vecs = vals[:r], vecs[:, :r]
    # row i holds sqrt(q_i) phi_i; ancilla is the leading index
    coeffs = np.sqrt(vals)[:, None] * vecs.T
    coeffs /= np.linalg.norm(coeffs)
    state = PureState(coeffs.ravel(), (r,) + rho.dims)
    return Purification(state, r, rho.dims)


def psd_sqrt(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """Hermitian PSD square root.

    Eigenvalues in ``[-1e-9, 0)`` are clamped to zero, as are positive
    eigenvalues below the round-off floor; anything more negative raises.
    """
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    vals, vecs = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    if vals.size and vals.min() < -STATE_TOL:
        raise NotPSDError(f"smallest eigenvalue {vals.min():.3g} is below -{STATE_TOL}")
    vals = np.where(vals < SQRT_NOISE_FLOOR, 0.0, vals)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


# -- random states -----------------------------------------------------------


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector in C^dim (normalized complex Gaussian)."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def random_pure_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    dims = check_dims(dims)
    return PureState(random_unit_vector(prod(dims), rng), dims)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density_matrix(
    dims: Sequence[int], rng: np.random.Generator, rank: int | None = None
) -> DensityMatrix:
    """Induced-measure random state of the given rank (full rank by default)."""
    dims = check_dims(dims)
    n = prod(dims)
    rank = n if rank is None else int(rank)
    if not 1 <= rank <= n:
        raise ValueError(f"rank must be in [1, {n}], got {rank}")
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    mat = g @ g.conj().T
    mat = 0.5 * (mat + mat.conj().T)
    return DensityMatrix(mat / np.trace(mat).real, dims)


def random_local_unitary(dims: Sequence[int], rng: np.random.Generator) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for d in dims:
        out = np.kron(out, haar_unitary(d, rng))
    return out


def conjugate(rho: DensityMatrix, unitary: np.ndarray) -> DensityMatrix:
    mat = unitary @ rho.matrix @ unitary.conj().T
    return DensityMatrix(0.5 * (mat + mat.conj().T), rho.dims)


# -- named states used throughout tests and examples -------------------------


def basis_state(dims: Sequence[int], digits: Sequence[int]) -> PureState:
    dims = check_dims(dims)
    vec = np.zeros(prod(dims), dtype=complex)
    vec[np.ravel_multi_index(tuple(digits), dims)] = 1.0
    return PureState(vec, dims)


def bell_state(kind: str = "phi+") -> PureState:
    """Two-qubit Bell states: ``phi+``, ``phi-``, ``psi+``, ``psi-`` (singlet)."""
    s = 1 / np.sqrt(2)
    vecs = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    return PureState(np.array(vecs[kind], dtype=complex), (2, 2))


def ghz_state(n: int = 3, d: int = 2) -> PureState:
    vec = np.zeros(d**n, dtype=complex)
    for k in range(d):
        vec[np.ravel_multi_index((k,) * n, (d,) * n)] = 1.0
    return PureState(vec / np.sqrt(d), (d,) * n)


def w_state(n: int = 3) -> PureState:
    vec = np.zeros(2**n, dtype=complex)
    for k in range(n):
        vec[1 << k] = 1.0
    return PureState(vec / np.sqrt(n), (2,) * n)


def werner_state(p: float) -> DensityMatrix:
    """``p |psi-><psi-| + (1 - p) I/4``."""
    singlet = bell_state("psi-").density().matrix
    return DensityMatrix(p * singlet + (1 - p) * np.eye(4) / 4, (2, 2))
