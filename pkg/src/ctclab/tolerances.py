"""Default numerical tolerances.

Every tolerance is overridable per call; scenario configs override them
through the ``tol_overrides`` map using keys like ``tol_fixed``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Mapping

from .errors import DomainError


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-10      # max |M - M^dag| entry for Hermiticity checks
    trace: float = 1e-10     # |Tr(rho) - 1|
    ortho: float = 1e-10     # max |U^dag U - I| entry
    norm: float = 1e-10      # | ||v|| - 1 | for state vectors
    psd: float = 1e-9        # eigenvalue floor: min eig >= -psd
    recon: float = 1e-9      # decomposition reconstruction residual
    spec: float = 1e-9       # spectrum equality residual
    fixed: float = 1e-9      # fixed-point residual (trace distance)
    eig: float = 1e-8        # |lambda - 1| window for fixed-subspace eigenvalues
    entropy: float = 1e-6    # entropy agreement, nats
    recursion: float = 1e-8  # recursion-vs-solver spectrum agreement
    witness: float = 1e-3    # spectrum-gap threshold that counts as a witness


DEFAULT = Tolerances()

_FIELD_NAMES = {f.name for f in fields(Tolerances)}


def with_overrides(overrides: Mapping[str, float] | None,
                   base: Tolerances = DEFAULT) -> Tolerances:
    """Apply a ``{"tol_fixed": 1e-9, ...}`` style override map to *base*.

    Keys may carry the ``tol_`` prefix or not. Unknown keys raise
    :class:`DomainError`.
    """
    if not overrides:
        return base
    cleaned = {}
    for key, value in overrides.items():
        name = key[4:] if key.startswith("tol_") else key
        if name not in _FIELD_NAMES:
            raise DomainError(f"unknown tolerance override {key!r}")
        cleaned[name] = float(value)
    return replace(base, **cleaned)
