"""Quantum fidelity in the squared convention.

``F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``. Many texts use the
square root of this quantity; everything in this package is squared.
"""

from __future__ import annotations

import numpy as np

from .core import DensityMatrix, PureState, SignatureError, as_density, purify, psd_sqrt

CONVENTION = "squared: F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2"


def _check_pair(a, b):
    if a.dims != b.dims:
        raise SignatureError(f"signature mismatch: {a.dims} vs {b.dims}")


def _clamp(f: float) -> float:
    return float(min(1.0, max(0.0, f)))


def fidelity(rho: DensityMatrix | PureState, sigma: DensityMatrix | PureState) -> float:
    """Trace-formula fidelity.

    Evaluated as the squared trace norm of ``sqrt(rho) sqrt(sigma)``, which has the
    same value as the nested square root but is symmetric by construction and
    avoids square roots of round-off eigenvalues.
    """
    rho, sigma = as_density(rho), as_density(sigma)
    _check_pair(rho, sigma)
    s = np.linalg.svd(psd_sqrt(rho) @ psd_sqrt(sigma), compute_uv=False)
    return _clamp(float(np.sum(s)) ** 2)


def fidelity_pure(psi: PureState, sigma: DensityMatrix) -> float:
    """``<psi|sigma|psi>``."""
    _check_pair(psi, sigma)
    a = psi.amplitudes
    return _clamp(float(np.real(a.conj() @ sigma.matrix @ a)))


def uhlmann_fidelity(rho: DensityMatrix | PureState, sigma: DensityMatrix | PureState) -> float:
    """Fidelity as the best overlap between purifications.

    Fixes the canonical purifications of both states on a common ancilla and
    maximizes ``|<psi|(U (x) 1)|phi>|**2`` over ancilla unitaries ``U``. With
    coefficient matrices ``Psi`` and ``Phi`` the overlap is ``Tr(U Phi Psi^dag)``,
    maximized by the inverse polar factor of ``Phi Psi^dag``.
    """
    rho, sigma = as_density(rho), as_density(sigma)
    _check_pair(rho, sigma)
    p, q = purify(rho).coefficient_matrix(), purify(sigma).coefficient_matrix()
    d = max(p.shape[0], q.shape[0])
    p = np.pad(p, ((0, d - p.shape[0]), (0, 0)))
    q = np.pad(q, ((0, d - q.shape[0]), (0, 0)))
    w, _, vh = np.linalg.svd(q @ p.conj().T)
    u = (w @ vh).conj().T
    overlap = np.vdot(p, u @ q)
    return _clamp(abs(overlap) ** 2)
