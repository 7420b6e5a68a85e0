"""JSON state files and report documents.

A state file looks like::

    {"kind": "pure", "dims": [2, 2],
     "data": [[0.7071067812, 0], [0, 0], [0, 0], [0.7071067812, 0]]}

Every complex number is a ``[re, im]`` pair. Mixed states carry a square array
of such pairs. Parsing is lenient to 1e-6 on norm, trace, Hermiticity and
positivity (so files with ten printed digits load), then the data is projected
onto the exact constraints and validated again at the strict tolerance.
"""

from __future__ import annotations

import json
from math import prod

import numpy as np

from .core import DensityMatrix, PureState, SignatureError, StateError, check_dims

PARSE_TOL = 1e-6


class StateFileError(ValueError):
    """The document is not a well-formed state file."""


def encode_complex(arr) -> list:
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [encode_complex(x) for x in arr]


def decode_complex(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"data must be nested arrays of [re, im] pairs: {exc}") from None
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise StateFileError("every complex entry must be a two-element [re, im] array")
    return arr[..., 0] + 1j * arr[..., 1]


def parse_state(text: str) -> PureState | DensityMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise StateFileError("state file must be a JSON object")
    missing = {"kind", "dims", "data"} - doc.keys()
    if missing:
        raise StateFileError(f"missing fields: {sorted(missing)}")
    try:
        dims = check_dims(doc["dims"])
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"bad dims: {exc}") from None
    n = prod(dims)
    data = decode_complex(doc["data"])

    if doc["kind"] == "pure":
        if data.shape != (n,):
            raise SignatureError(f"pure data must hold {n} amplitudes, got shape {data.shape}")
        norm = np.linalg.norm(data)
        if abs(norm - 1.0) > PARSE_TOL:
            raise StateError(f"norm violation: |psi| = {norm:.12g}")
        return PureState(data / norm, dims)

    if doc["kind"] == "mixed":
        if data.shape != (n, n):
            raise SignatureError(f"mixed data must be {n}x{n}, got shape {data.shape}")
        dev = np.max(np.abs(data - data.conj().T))
        if dev > PARSE_TOL:
            raise StateError(f"Hermiticity violation: max deviation {dev:.3g}")
        data = 0.5 * (data + data.conj().T)
        tr = np.trace(data).real
        if abs(tr - 1.0) > PARSE_TOL:
            raise StateError(f"trace violation: Tr rho = {tr:.12g}")
        data = data / tr
        vals, vecs = np.linalg.eigh(data)
        if vals.min() < -PARSE_TOL:
            raise StateError(f"positivity violation: eigenvalue {vals.min():.3g}")
        if vals.min() < 0:
            vals = np.clip(vals, 0.0, None)
            data = (vecs * (vals / vals.sum())) @ vecs.conj().T
            data = 0.5 * (data + data.conj().T)
        return DensityMatrix(data, dims)

    raise StateFileError(f"kind must be 'pure' or 'mixed', got {doc['kind']!r}")


def state_document(state: PureState | DensityMatrix) -> dict:
    if isinstance(state, PureState):
        return {"kind": "pure", "dims": list(state.dims), "data": encode_complex(state.amplitudes)}
    return {"kind": "mixed", "dims": list(state.dims), "data": encode_complex(state.matrix)}


def dump_state(state: PureState | DensityMatrix) -> str:
    # json writes floats with the shortest repr that round-trips exactly
    return json.dumps(state_document(state)) + "\n"


def load_state(path) -> PureState | DensityMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_state(fh.read())


def dump_report(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"
