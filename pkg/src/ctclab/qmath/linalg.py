"""Dense linear algebra for finite-dimensional quantum states.

Composite systems use the convention that the left factor is the slow
index: a basis vector of A tensor B with indices (i_A, i_B) sits at
position i_A * d_B + i_B. All functions accept anything coercible to a
complex ndarray.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..errors import DomainError, ShapeError, SizingError
from ..tolerances import DEFAULT, Tolerances
from .checks import (as_matrix, as_square, as_vector, assert_hermitian,
                     assert_pure_state, dimension_cap)

# coefficients / amplitudes below this are treated as exact zeros when
# truncating Schmidt terms or picking phase anchors
_CUTOFF = 1e-12


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def hermitize(m) -> np.ndarray:
    """Return (M + M^dag)/2."""
    m = as_square(m)
    return (m + m.conj().T) / 2.0


def tensor(a, b, max_dim: int | None = None) -> np.ndarray:
    """Kronecker product with the composite-dimension cap enforced.

    Parameters
    ----------
    a, b : array_like
        Matrices (or column/row shapes produced by reshape).
    max_dim : int, optional
        Cap on the product dimension; defaults to the configured cap
        (64, or the CTC_LAB_MAX_DIM environment override).
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    cap = dimension_cap() if max_dim is None else max_dim
    if max(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]) > cap:
        raise SizingError(
            f"tensor product dimension {a.shape[0] * b.shape[0]} exceeds cap {cap}")
    return np.kron(a, b)


def kron_vec(a, b) -> np.ndarray:
    """Kronecker product of two state vectors."""
    return np.kron(as_vector(a, "a"), as_vector(b, "b"))


def partial_trace(m, dims: tuple[int, int], keep: Literal["A", "B"]) -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    Parameters
    ----------
    m : array_like
        Operator on A tensor B, shape (d_A*d_B, d_A*d_B).
    dims : (int, int)
        (d_A, d_B).
    keep : "A" or "B"
        Which subsystem survives.
    """
    m = as_square(m)
    d_a, d_b = int(dims[0]), int(dims[1])
    if d_a < 1 or d_b < 1:
        raise ShapeError(f"dims must be positive, got {dims}")
    if m.shape[0] != d_a * d_b:
        raise ShapeError(f"operator of shape {m.shape} does not factor as {d_a}x{d_b}")
    if keep not in ("A", "B"):
        raise DomainError(f"keep must be 'A' or 'B', got {keep!r}")
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.trace(t, axis1=1, axis2=3)
    return np.trace(t, axis1=0, axis2=2)


def vec(m) -> np.ndarray:
    """Column-stacking vectorization."""
    return as_square(m).reshape(-1, order="F")


def unvec(v, dim: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = as_vector(v)
    if v.size != dim * dim:
        raise ShapeError(f"vector of length {v.size} is not a vectorized {dim}x{dim} matrix")
    return v.reshape(dim, dim, order="F")


def eig_hermitian(m, tol: Tolerances = DEFAULT) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is checked Hermitian within ``tol.herm`` and symmetrized
    before the decomposition. Returns ``(w, V)`` with real ``w`` sorted
    descending and matching eigenvector columns ``V[:, i]``.
    """
    m = assert_hermitian(m, tol.herm)
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return w[::-1].copy(), v[:, ::-1].copy()


def spectrum(rho, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Eigenvalues of a Hermitian operator, sorted descending."""
    return eig_hermitian(rho, tol)[0]


def clamp_spectrum(w: np.ndarray) -> np.ndarray:
    """Clamp negative weights to zero and renormalize to unit sum."""
    w = np.clip(np.real(w), 0.0, None)
    total = w.sum()
    if total <= 0.0:
        raise DomainError("spectrum has no positive weight")
    return w / total


def vn_entropy(rho, tol: Tolerances = DEFAULT) -> float:
    """Von Neumann entropy in nats.

    Eigenvalues in [-tol.psd, 0) are clamped to zero and the spectrum is
    renormalized before evaluating -sum(p ln p).
    """
    w = clamp_spectrum(spectrum(rho, tol))
    pos = w[w > 0.0]
    return float(-(pos * np.log(pos)).sum())


def entropy_of_weights(w: np.ndarray) -> float:
    """Entropy of a clamped, renormalized weight vector."""
    w = clamp_spectrum(np.asarray(w, dtype=float))
    pos = w[w > 0.0]
    return float(-(pos * np.log(pos)).sum())


def purity(rho) -> float:
    rho = as_square(rho)
    return float(np.real(np.trace(rho @ rho)))


def trace_distance(a, b) -> float:
    """Trace distance (1/2)||a - b||_1 between Hermitian operators."""
    a = as_square(a, "a")
    b = as_square(b, "b")
    if a.shape != b.shape:
        raise ShapeError(f"operands have different shapes {a.shape} vs {b.shape}")
    diff = a - b
    w = np.linalg.eigvalsh((diff + diff.conj().T) / 2.0)
    return float(np.abs(w).sum() / 2.0)


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Bipartite decomposition v = sum_k c_k a_k tensor b_k.

    coefficients are real, positive and sorted descending; basis_a and
    basis_b hold the matching orthonormal vectors as columns.
    """

    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray
    dims: tuple[int, int]

    def reconstruct(self) -> np.ndarray:
        m = (self.basis_a * self.coefficients) @ self.basis_b.T
        return m.reshape(-1)


def schmidt(v, dims: tuple[int, int], tol: Tolerances = DEFAULT) -> SchmidtDecomposition:
    """Schmidt decomposition of a bipartite unit vector.

    The output is canonicalized: coefficients descending, groups of equal
    coefficients ordered by the first differing amplitude of the A-side
    vectors, and each A-side vector's first nonzero amplitude made real
    positive (the phase moves to the B side).
    """
    v = assert_pure_state(v, tol.norm)
    d_a, d_b = int(dims[0]), int(dims[1])
    if d_a * d_b != v.size:
        raise ShapeError(f"vector of length {v.size} does not factor as {d_a}x{d_b}")
    u, s, vh = np.linalg.svd(v.reshape(d_a, d_b), full_matrices=False)
    keep = s > _CUTOFF
    s = s[keep]
    u = u[:, keep]
    vh = vh[keep, :]

    for k in range(s.size):
        col = u[:, k]
        anchor = np.flatnonzero(np.abs(col) > _CUTOFF)
        if anchor.size == 0:
            continue
        phase = col[anchor[0]] / abs(col[anchor[0]])
        u[:, k] = col * np.conj(phase)
        vh[k, :] = vh[k, :] * phase

    order = _tie_order(s, u)
    return SchmidtDecomposition(
        coefficients=s[order],
        basis_a=u[:, order],
        basis_b=vh[order, :].T.copy(),
        dims=(d_a, d_b),
    )


def _tie_order(s: np.ndarray, u: np.ndarray) -> list[int]:
    """Stable order: descending coefficient, ties by A-vector amplitudes."""
    order: list[int] = []
    i = 0
    while i < s.size:
        j = i
        while j + 1 < s.size and abs(s[j + 1] - s[i]) <= _CUTOFF:
            j += 1
        group = list(range(i, j + 1))
        if len(group) > 1:
            group.sort(key=lambda k: tuple(
                (float(z.real), float(z.imag)) for z in u[:, k]))
        order.extend(group)
        i = j + 1
    return order
