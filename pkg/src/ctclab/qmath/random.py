"""Seeded sampling of unitaries and states.

All randomness flows through numpy's PCG64 generator. Independent streams
are derived from a root seed, a 64-bit label tag and a trial index via
SeedSequence, so any trial of any scenario can be reproduced in isolation.
"""

from __future__ import annotations

import hashlib

import numpy as np

from ..errors import DomainError, ShapeError


def label_tag(label: str) -> int:
    """Stable 64-bit tag for a stream label."""
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def seed_sequence(seed: int, label: str, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), label_tag(label), int(index)])


def rng_for(seed: int, label: str, index: int) -> np.random.Generator:
    """Generator for stream (seed, label, index)."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, label, index)))


def derived_seed(seed: int, label: str, index: int) -> int:
    """A single reproducible integer seed for stream (seed, label, index)."""
    return int(seed_sequence(seed, label, index).generate_state(1, np.uint64)[0])


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    return z / np.sqrt(2.0)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    Column i of Q is multiplied by the phase of conj(R_ii), which fixes
    the QR gauge and leaves the result Haar distributed.
    """
    if dim < 1:
        raise ShapeError(f"dimension must be positive, got {dim}")
    q, r = np.linalg.qr(ginibre(dim, dim, rng))
    diag = np.diagonal(r).copy()
    mags = np.abs(diag)
    phases = np.where(mags > 0.0, np.conj(diag) / np.where(mags > 0.0, mags, 1.0), 1.0)
    return q * phases


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector."""
    if dim < 1:
        raise ShapeError(f"dimension must be positive, got {dim}")
    v = ginibre(dim, 1, rng)[:, 0]
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise DomainError("degenerate zero sample")
    return v / norm


def random_density(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Random density matrix of the given rank (Ginibre construction)."""
    if dim < 1:
        raise ShapeError(f"dimension must be positive, got {dim}")
    if not 1 <= rank <= dim:
        raise DomainError(f"rank must lie in [1, {dim}], got {rank}")
    g = ginibre(dim, rank, rng)
    rho = g @ g.conj().T
    return rho / np.real(np.trace(rho))
