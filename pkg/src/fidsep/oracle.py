"""Brute-force reference values for tests and ``fidsep verify``.

Nothing here calls the optimized solvers; only the state containers and the
PSD square root are shared. Every function returns a lower bound on the
quantity it samples.
"""

from __future__ import annotations

import string

import numpy as np

from .core import DensityMatrix, PureState, as_density, psd_sqrt


def _haar_factors(rng: np.random.Generator, shape: tuple[int, ...], d: int) -> np.ndarray:
    z = rng.standard_normal(shape + (d,)) + 1j * rng.standard_normal(shape + (d,))
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def _kron_rows(factors: list[np.ndarray]) -> np.ndarray:
    """Row-wise Kronecker product over the last axis of equally batched arrays."""
    out = factors[0]
    for f in factors[1:]:
        out = (out[..., :, None] * f[..., None, :]).reshape(out.shape[:-1] + (-1,))
    return out


# Samples are drawn in fixed-size chunks, chunk c from default_rng([seed, c]),
# so a larger budget always contains every sample of a smaller one.
CHUNK = 1024


def _chunks(total: int, seed: int):
    for c, start in enumerate(range(0, total, CHUNK)):
        yield min(CHUNK, total - start), np.random.default_rng([seed, c])


def brute_lambda_max(psi: PureState, samples: int = 10_000, seed: int = 0, sweeps: int = 50) -> float:
    """Best overlap over ``samples`` Haar-random product states, each polished by
    ``sweeps`` rounds of single-factor updates run in lockstep across samples."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if len(psi.dims) == 1:
        return 1.0
    best = 0.0
    for size, rng in _chunks(samples, seed):
        factors = [_haar_factors(rng, (CHUNK,), d)[:size] for d in psi.dims]
        best = max(best, _polish(psi, factors, sweeps))
    return float(min(1.0, best))


def _polish(psi: PureState, factors: list[np.ndarray], sweeps: int) -> float:
    n = len(psi.dims)
    letters = string.ascii_letters[: n + 1]
    batch, axes = letters[0], letters[1:]
    t = psi.tensor()
    for _ in range(sweeps):
        for k in range(n):
            others = [batch + axes[j] for j in range(n) if j != k]
            subscripts = f"{axes}," + ",".join(others) + f"->{batch}{axes[k]}"
            v = np.einsum(subscripts, t, *[factors[j].conj() for j in range(n) if j != k])
            norms = np.linalg.norm(v, axis=1, keepdims=True)
            factors[k] = np.where(norms > 0, v / np.where(norms > 0, norms, 1), factors[k])
    overlaps = np.abs(_kron_rows(factors).conj() @ psi.amplitudes)
    return float(overlaps.max())


def sample_separable(
    dims: tuple[int, ...], ensembles: int, branches: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Random separable ensembles.

    Returns ``(weights, vectors)`` with shapes ``(ensembles, branches)`` and
    ``(ensembles, branches, prod(dims))``; weights are flat-Dirichlet.
    """
    vecs = _kron_rows([_haar_factors(rng, (ensembles, branches), d) for d in dims])
    weights = rng.dirichlet(np.ones(branches), size=ensembles)
    return weights, vecs


def brute_f_sep_lower(
    rho: DensityMatrix | PureState,
    ensembles: int = 10_000,
    branches: int = 8,
    seed: int = 0,
) -> float:
    """Largest ``F(rho, sigma)`` over random separable ``sigma``.

    With ``sigma = B B^dag`` (columns ``sqrt(q_i) phi_i``) the fidelity is the
    squared trace norm of ``B^dag sqrt(rho)``.
    """
    if ensembles < 1 or branches < 1:
        raise ValueError("ensembles and branches must be >= 1")
    rho = as_density(rho)
    root = psd_sqrt(rho)
    best = 0.0
    for size, rng in _chunks(ensembles, seed):
        weights, vecs = sample_separable(rho.dims, CHUNK, branches, rng)
        weights, vecs = weights[:size], vecs[:size]
        b_dag = np.sqrt(weights)[..., None] * vecs.conj()
        s = np.linalg.svd(b_dag @ root, compute_uv=False)
        best = max(best, float(np.max(np.sum(s, axis=1) ** 2)))
    return min(1.0, best)
