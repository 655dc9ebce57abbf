"""Standard unitaries and basis helpers."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError
from .checks import as_square


def identity(dim: int) -> np.ndarray:
    if dim < 1:
        raise ShapeError(f"dimension must be positive, got {dim}")
    return np.eye(dim, dtype=complex)


def swap(d: int) -> np.ndarray:
    """Swap of two d-dimensional factors: S(x tensor y) = y tensor x."""
    if d < 1:
        raise ShapeError(f"dimension must be positive, got {d}")
    s = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


def controlled_apply(target_unitary, control_dim: int) -> np.ndarray:
    """Apply a unitary to the target iff the control reads its top value.

    The control is the left (slow) factor; the target unitary fires on
    control index control_dim - 1 and the identity acts otherwise.
    controlled_apply(pauli_x(), 2) is CNOT.
    """
    v = as_square(target_unitary, "target_unitary")
    if control_dim < 2:
        raise ShapeError(f"control dimension must be at least 2, got {control_dim}")
    d_t = v.shape[0]
    proj_last = np.zeros((control_dim, control_dim), dtype=complex)
    proj_last[-1, -1] = 1.0
    rest = np.eye(control_dim, dtype=complex) - proj_last
    return np.kron(rest, np.eye(d_t, dtype=complex)) + np.kron(proj_last, v)


def pauli_x() -> np.ndarray:
    return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def cnot() -> np.ndarray:
    return controlled_apply(pauli_x(), 2)


def basis_state(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise ShapeError(f"basis index {index} out of range for dimension {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())
