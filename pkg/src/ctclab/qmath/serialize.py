"""JSON interchange for matrices and pure states.

Matrix documents look like ``{"rows": n, "cols": m, "entries": [[re, im],
...]}`` with entries row-major; pure states use ``{"dim": n, "amplitudes":
[[re, im], ...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import DomainError, PayloadError
from .checks import as_matrix, as_vector


def _pairs(values, count: int, what: str) -> np.ndarray:
    if not isinstance(values, list) or len(values) != count:
        raise DomainError(f"{what} must be a list of {count} [re, im] pairs")
    out = np.empty(count, dtype=complex)
    for i, pair in enumerate(values):
        if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                or not all(isinstance(x, (int, float)) for x in pair)):
            raise DomainError(f"{what}[{i}] must be an [re, im] pair of numbers")
        out[i] = complex(pair[0], pair[1])
    return out


def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel(order="C")],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise DomainError("matrix document must be a JSON object")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError("matrix document needs integer 'rows' and 'cols'") from exc
    if rows < 1 or cols < 1:
        raise DomainError(f"matrix dimensions must be positive, got {rows}x{cols}")
    flat = _pairs(obj.get("entries"), rows * cols, "entries")
    return flat.reshape(rows, cols)


def pure_state_to_json(v) -> dict:
    v = as_vector(v)
    return {
        "dim": int(v.size),
        "amplitudes": [[float(z.real), float(z.imag)] for z in v],
    }


def pure_state_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise DomainError("state document must be a JSON object")
    try:
        dim = int(obj["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError("state document needs an integer 'dim'") from exc
    if dim < 1:
        raise DomainError(f"state dimension must be positive, got {dim}")
    return _pairs(obj.get("amplitudes"), dim, "amplitudes")


def load_matrix(path: str | Path) -> np.ndarray:
    """Read a matrix JSON file. OSError passes through; bad content raises
    PayloadError."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return matrix_from_json(json.loads(text))
    except (json.JSONDecodeError, DomainError) as exc:
        raise PayloadError(f"{path}: {exc}") from exc


def load_pure_state(path: str | Path) -> np.ndarray:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return pure_state_from_json(json.loads(text))
    except (json.JSONDecodeError, DomainError) as exc:
        raise PayloadError(f"{path}: {exc}") from exc
