"""Validation helpers for operators and state vectors."""

from __future__ import annotations

import os

import numpy as np

from ..errors import DomainError, ShapeError
from ..tolerances import DEFAULT, Tolerances

DEFAULT_MAX_DIM = 64
MAX_DIM_ENV = "CTC_LAB_MAX_DIM"


def dimension_cap() -> int:
    """Composite-dimension cap; the CTC_LAB_MAX_DIM env var overrides it."""
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        cap = int(raw)
    except ValueError as exc:
        raise DomainError(f"{MAX_DIM_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise DomainError(f"{MAX_DIM_ENV} must be positive, got {cap}")
    return cap


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex ndarray."""
    out = np.asarray(m, dtype=complex)
    if out.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise DomainError(f"{name} contains non-finite entries")
    return out


def as_square(m, name: str = "matrix") -> np.ndarray:
    out = as_matrix(m, name)
    if out.shape[0] != out.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {out.shape}")
    return out


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Coerce to a finite 1-D complex ndarray."""
    out = np.asarray(v, dtype=complex)
    if out.ndim != 1:
        raise ShapeError(f"{name} must be 1-dimensional, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise DomainError(f"{name} contains non-finite entries")
    return out


def herm_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def is_hermitian(m, tol: float = DEFAULT.herm) -> bool:
    return herm_defect(as_square(m)) <= tol


def assert_hermitian(m, tol: float = DEFAULT.herm, name: str = "matrix") -> np.ndarray:
    out = as_square(m, name)
    defect = herm_defect(out)
    if defect > tol:
        raise DomainError(f"{name} is not Hermitian (defect {defect:.3e} > {tol:.1e})")
    return out


def assert_unitary(u, tol: float = DEFAULT.ortho, name: str = "unitary") -> np.ndarray:
    out = as_square(u, name)
    defect = float(np.max(np.abs(out.conj().T @ out - np.eye(out.shape[0]))))
    if defect > tol:
        raise DomainError(f"{name} is not unitary (defect {defect:.3e} > {tol:.1e})")
    return out


def assert_density_matrix(rho, tol: Tolerances = DEFAULT,
                          name: str = "rho") -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the coerced array."""
    out = assert_hermitian(rho, tol.herm, name)
    trace_defect = abs(out.trace() - 1.0)
    if trace_defect > tol.trace:
        raise DomainError(f"{name} trace deviates from 1 by {trace_defect:.3e}")
    w = np.linalg.eigvalsh((out + out.conj().T) / 2.0)
    if w[0] < -tol.psd:
        raise DomainError(f"{name} has negative eigenvalue {w[0]:.3e}")
    return out


def assert_pure_state(v, tol: float = DEFAULT.norm, name: str = "state") -> np.ndarray:
    out = as_vector(v, name)
    defect = abs(np.linalg.norm(out) - 1.0)
    if defect > tol:
        raise DomainError(f"{name} is not normalized (defect {defect:.3e})")
    return out
