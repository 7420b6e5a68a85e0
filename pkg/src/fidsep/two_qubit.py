"""Closed forms for two qubits, driven by the Wootters concurrence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SQRT_NOISE_FLOOR, DensityMatrix, PureState, SignatureError, as_density

_SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass(frozen=True)
class TwoQubitReport:
    concurrence: float
    e_ge: float
    f_sep: float
    e_b: float


def _two_qubit(rho) -> DensityMatrix:
    rho = as_density(rho)
    if rho.dims != (2, 2):
        raise SignatureError(f"two-qubit state required, got dims {rho.dims}")
    return rho


def concurrence(rho: DensityMatrix | PureState) -> float:
    """Wootters concurrence ``max(0, mu1 - mu2 - mu3 - mu4)``.

    ``mu_i`` are the decreasing square roots of the eigenvalues of
    ``rho (sy x sy) rho* (sy x sy)``, with ``rho*`` the entrywise conjugate.
    They are computed as the singular values of ``B^T (sy x sy) B`` for
    ``rho = B B^dag``, which keeps round-off eigenvalues of rank-deficient
    states from turning into ~1e-8 errors under the square root.
    """
    m = _two_qubit(rho).matrix
    vals, vecs = np.linalg.eigh(m)
    if vals.min() < -1e-10:
        raise ValueError(f"state has a negative eigenvalue {vals.min():.3g}")
    vals = np.where(vals < SQRT_NOISE_FLOOR, 0.0, vals)
    b = vecs * np.sqrt(vals)
    mu = np.linalg.svd(b.T @ _SIGMA_YY @ b, compute_uv=False)
    c = mu[0] - mu[1] - mu[2] - mu[3]
    # sqrt(1 - C^2) turns a few ulps below 1 into ~1e-8; snap those to 1
    if c > 1.0 - 1e-14:
        return 1.0
    return float(max(0.0, c))


def _root(c: float) -> float:
    return float(np.sqrt(max(0.0, 1.0 - c * c)))


def e_ge_from_concurrence(c: float) -> float:
    return (1.0 - _root(c)) / 2.0


def f_sep_from_concurrence(c: float) -> float:
    return (1.0 + _root(c)) / 2.0


def bures_from_concurrence(c: float) -> float:
    return 2.0 - 2.0 * np.sqrt(f_sep_from_concurrence(c))


def e_ge_two_qubit(rho) -> float:
    return e_ge_from_concurrence(concurrence(rho))


def f_sep_two_qubit(rho) -> float:
    return f_sep_from_concurrence(concurrence(rho))


def bures_two_qubit(rho) -> float:
    return bures_from_concurrence(concurrence(rho))


def two_qubit_report(rho) -> TwoQubitReport:
    c = concurrence(rho)
    f = f_sep_from_concurrence(c)
    return TwoQubitReport(c, 1.0 - f, f, bures_from_concurrence(c))
