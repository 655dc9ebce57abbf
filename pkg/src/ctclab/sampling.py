"""Turn unitary / CR-state descriptors into concrete arrays.

Descriptors are the strings accepted by scenario configs: ``haar``,
``swap``, ``identity`` or ``file:<path>`` for unitaries; ``pure-random``,
``mixed-random``, ``maximally-mixed`` or ``file:<path>`` for CR states.
Random kinds consume the supplied generator; deterministic kinds ignore it.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, PayloadError
from .qmath import (assert_density_matrix, assert_unitary, eig_hermitian,
                    haar_unitary, identity, load_matrix, projector, purity,
                    random_density, random_pure, swap)
from .tolerances import DEFAULT, Tolerances

UNITARY_KINDS = ("haar", "swap", "identity")
CR_STATE_KINDS = ("pure-random", "mixed-random", "maximally-mixed")
FILE_PREFIX = "file:"


def is_known_unitary_kind(kind: str) -> bool:
    return kind in UNITARY_KINDS or kind.startswith(FILE_PREFIX)


def is_known_cr_state_kind(kind: str) -> bool:
    return kind in CR_STATE_KINDS or kind.startswith(FILE_PREFIX)


def unitary_varies(kind: str) -> bool:
    """Does this kind draw a fresh sample per trial?"""
    return kind == "haar"


def cr_state_varies(kind: str) -> bool:
    return kind in ("pure-random", "mixed-random")


def resolve_unitary(kind: str, d_cr: int, d_ctc: int,
                    rng: np.random.Generator,
                    tol: Tolerances = DEFAULT) -> tuple[np.ndarray, str]:
    """Return (unitary, descriptor) for the given kind."""
    dim = d_cr * d_ctc
    if kind == "haar":
        return haar_unitary(dim, rng), "haar"
    if kind == "identity":
        return identity(dim), f"identity({dim})"
    if kind == "swap":
        if d_cr != d_ctc:
            raise DomainError(
                f"swap needs equal dimensions, got ({d_cr}, {d_ctc})")
        return swap(d_cr), f"swap({d_cr})"
    if kind.startswith(FILE_PREFIX):
        path = kind[len(FILE_PREFIX):]
        u = load_matrix(path)
        try:
            assert_unitary(u, tol.ortho, "unitary payload")
        except DomainError as exc:
            raise PayloadError(f"{path}: {exc}") from exc
        if u.shape[0] != dim:
            raise PayloadError(
                f"{path}: unitary of dimension {u.shape[0]} does not match "
                f"{d_cr}x{d_ctc}")
        return u, kind
    raise DomainError(f"unknown unitary kind {kind!r}")


def resolve_cr_state(kind: str, d_cr: int, rng: np.random.Generator,
                     tol: Tolerances = DEFAULT
                     ) -> tuple[np.ndarray, str, np.ndarray | None]:
    """Return (density, descriptor, state_vector_or_None)."""
    if kind == "pure-random":
        psi = random_pure(d_cr, rng)
        return projector(psi), "pure-random", psi
    if kind == "mixed-random":
        return random_density(d_cr, d_cr, rng), "mixed-random", None
    if kind == "maximally-mixed":
        return np.eye(d_cr, dtype=complex) / d_cr, f"maximally-mixed({d_cr})", None
    if kind.startswith(FILE_PREFIX):
        path = kind[len(FILE_PREFIX):]
        rho = load_matrix(path)
        try:
            assert_density_matrix(rho, tol, "CR state payload")
        except DomainError as exc:
            raise PayloadError(f"{path}: {exc}") from exc
        if rho.shape[0] != d_cr:
            raise PayloadError(
                f"{path}: state of dimension {rho.shape[0]} does not match {d_cr}")
        return rho, kind, None
    raise DomainError(f"unknown CR state kind {kind!r}")


def extract_pure_vector(rho, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Top eigenvector of a rank-one density matrix."""
    if purity(rho) < 1.0 - 1e-10:
        raise DomainError("CR state is not pure; a pure state is required here")
    _, v = eig_hermitian(rho, tol)
    return v[:, 0]
