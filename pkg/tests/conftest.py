"""Shared test helpers."""

import numpy as np
import pytest


def ptrace_oracle(m, d_a, d_b, keep):
    """Index-sum partial trace, independent of the package implementation."""
    m = np.asarray(m)
    if keep == "A":
        out = np.zeros((d_a, d_a), dtype=complex)
        for i in range(d_a):
            for j in range(d_a):
                for b in range(d_b):
                    out[i, j] += m[i * d_b + b, j * d_b + b]
    else:
        out = np.zeros((d_b, d_b), dtype=complex)
        for i in range(d_b):
            for j in range(d_b):
                for a in range(d_a):
                    out[i, j] += m[a * d_b + i, a * d_b + j]
    return out


def direct_ctc_action(u, rho_cr, rho_ctc, d_cr, d_ctc):
    """Tr_CR[U (rho_cr tensor rho_ctc) U^dag] computed the long way."""
    joint = u @ np.kron(rho_cr, rho_ctc) @ u.conj().T
    return ptrace_oracle(joint, d_cr, d_ctc, "B")


def rand_density(dim, rank, seed):
    """Independent Ginibre-based density sample for test inputs."""
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank)))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def rand_unitary(dim, seed):
    """Independent Haar-ish unitary for test inputs (QR gauge irrelevant here)."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def rand_pure(dim, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


@pytest.fixture
def tmp_matrix_file(tmp_path):
    """Write a matrix JSON document to a temp file and return the path."""
    import json

    def _write(m, name="mat.json"):
        doc = {
            "rows": m.shape[0],
            "cols": m.shape[1],
            "entries": [[float(z.real), float(z.imag)] for z in np.asarray(m).ravel()],
        }
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return path

    return _write
