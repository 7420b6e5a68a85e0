"""Fidelity-based and geometric entanglement measures for finite-dimensional
multipartite states."""

__version__ = "0.1.0"

from .convex_roof import (
    Decomposition,
    MeasureReport,
    RoofOptions,
    SeparableEnsemble,
    entanglement_report,
    f_sep_mixed,
)
from .core import (
    DensityMatrix,
    PureState,
    bell_state,
    ghz_state,
    partial_trace,
    purify,
    schmidt_decompose,
    tensor_product,
    w_state,
    werner_state,
)
from .fidelity import fidelity, fidelity_pure, uhlmann_fidelity
from .pure import ProductState, SolverOptions, e_ge_pure, f_sep_pure, lambda_max, lambda_max_bipartite
from .two_qubit import concurrence, two_qubit_report

__all__ = [
    "Decomposition",
    "DensityMatrix",
    "MeasureReport",
    "ProductState",
    "PureState",
    "RoofOptions",
    "SeparableEnsemble",
    "SolverOptions",
    "bell_state",
    "concurrence",
    "e_ge_pure",
    "entanglement_report",
    "f_sep_mixed",
    "f_sep_pure",
    "fidelity",
    "fidelity_pure",
    "ghz_state",
    "lambda_max",
    "lambda_max_bipartite",
    "partial_trace",
    "purify",
    "schmidt_decompose",
    "tensor_product",
    "two_qubit_report",
    "uhlmann_fidelity",
    "w_state",
    "werner_state",
]
