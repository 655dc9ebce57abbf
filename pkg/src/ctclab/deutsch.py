"""Self-consistent evolution around a closed timelike curve.

A chronology-respecting (CR) system with state rho_cr meets a
chronology-violating (CTC) system under a joint unitary U. The CTC state
must satisfy the self-consistency condition

    rho = Tr_CR[ U (rho_cr tensor rho) U^dag ],

i.e. it is a fixed point of the linear map on the right. The map is
completely positive and trace preserving, so a fixed density matrix
always exists; when several exist, the maximum-entropy one is selected.
The CR system then leaves the interaction in

    Tr_CTC[ U (rho_cr tensor rho*) U^dag ],

which depends nonlinearly on rho_cr because rho* does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError, SizingError, SolverError
from .qmath import (assert_density_matrix, assert_pure_state, assert_unitary,
                    dimension_cap, entropy_of_weights, hermitize,
                    partial_trace, projector, tensor, trace_distance, unvec,
                    vec)
from .tolerances import DEFAULT, Tolerances

CESARO_TERMS = 512
MAX_ASCENT_ITERATIONS = 10_000
ENTROPY_IMPROVEMENT_FLOOR = 1e-10
_EIGVEC_NORM_FLOOR = 1e-12
_BASIS_RANK_RTOL = 1e-8


@dataclass(frozen=True)
class CtcChannel:
    """The CTC-side map rho -> Tr_CR[U (rho_cr tensor rho) U^dag].

    superoperator is the column-stacking matrix representation; kraus
    holds operators A with sum_A A rho A^dag equal to the map's action,
    which makes complete positivity and trace preservation explicit.
    """

    d_cr: int
    d_ctc: int
    unitary: np.ndarray
    cr_input: np.ndarray
    kraus: tuple[np.ndarray, ...]
    superoperator: np.ndarray


@dataclass(frozen=True)
class FixedPointSolution:
    """A self-consistent CTC state plus the structure around it.

    representative is the maximum-entropy fixed density matrix;
    fixed_basis is a Hilbert-Schmidt-orthonormal Hermitian basis of the
    full fixed operator subspace; unique means that subspace is
    one-dimensional, in which case the fixed state set is a single point.
    """

    representative: np.ndarray
    fixed_basis: tuple[np.ndarray, ...]
    unique: bool
    residual: float
    entropy: float


def build_channel(unitary, rho_cr, d_cr: int, d_ctc: int,
                  tol: Tolerances = DEFAULT) -> CtcChannel:
    """Assemble the CTC-side channel for a given interaction and CR input.

    Kraus operators are A_ij = sqrt(q_j) (<i| tensor I) U (|v_j> tensor I)
    with rho_cr = sum_j q_j |v_j><v_j|, indexed over the CR output basis i
    and the CR input eigenvectors j.
    """
    d_cr, d_ctc = int(d_cr), int(d_ctc)
    if d_cr < 1 or d_ctc < 1:
        raise ShapeError(f"dimensions must be positive, got ({d_cr}, {d_ctc})")
    if d_cr * d_ctc > dimension_cap():
        raise SizingError(
            f"composite dimension {d_cr * d_ctc} exceeds cap {dimension_cap()}")
    u = assert_unitary(unitary, tol.ortho)
    if u.shape[0] != d_cr * d_ctc:
        raise ShapeError(
            f"unitary of dimension {u.shape[0]} does not match {d_cr}x{d_ctc}")
    rho = assert_density_matrix(rho_cr, tol, "rho_cr")
    if rho.shape[0] != d_cr:
        raise ShapeError(f"rho_cr has dimension {rho.shape[0]}, expected {d_cr}")

    q, vecs = np.linalg.eigh(hermitize(rho))
    u4 = u.reshape(d_cr, d_ctc, d_cr, d_ctc)
    kraus = []
    for j in range(d_cr):
        if q[j] <= 1e-15:
            continue
        root = np.sqrt(q[j])
        # (d_cr, d_ctc, d_ctc) block: sum_k v_j[k] U[i, :, k, :]
        blocks = np.tensordot(u4, vecs[:, j], axes=([2], [0]))
        for i in range(d_cr):
            kraus.append(root * blocks[i])

    dim = d_ctc * d_ctc
    s_op = np.zeros((dim, dim), dtype=complex)
    for a in kraus:
        s_op += np.kron(a.conj(), a)
    return CtcChannel(d_cr=d_cr, d_ctc=d_ctc, unitary=u, cr_input=rho,
                      kraus=tuple(kraus), superoperator=s_op)


def apply_channel(channel: CtcChannel, operator) -> np.ndarray:
    """Apply the channel's linear action to any CTC-side operator."""
    m = np.asarray(operator, dtype=complex)
    if m.shape != (channel.d_ctc, channel.d_ctc):
        raise ShapeError(
            f"operator shape {m.shape} does not match CTC dimension {channel.d_ctc}")
    return unvec(channel.superoperator @ vec(m), channel.d_ctc)


# ------------------------------------------------------------------
# fixed-subspace extraction

def _embed_hermitian(h: np.ndarray, d: int) -> np.ndarray:
    """Isometric real coordinates of a Hermitian matrix (HS inner product)."""
    iu = np.triu_indices(d, k=1)
    return np.concatenate([
        np.real(np.diagonal(h)),
        np.sqrt(2.0) * np.real(h[iu]),
        np.sqrt(2.0) * np.imag(h[iu]),
    ])


def _unembed_hermitian(r: np.ndarray, d: int) -> np.ndarray:
    iu = np.triu_indices(d, k=1)
    n_off = iu[0].size
    h = np.zeros((d, d), dtype=complex)
    h[np.diag_indices(d)] = r[:d]
    re = r[d:d + n_off] / np.sqrt(2.0)
    im = r[d + n_off:] / np.sqrt(2.0)
    h[iu] = re + 1j * im
    h[(iu[1], iu[0])] = re - 1j * im
    return h


def _orthonormal_hermitian_basis(candidates: list[np.ndarray],
                                 d: int) -> list[np.ndarray]:
    """Rank-revealing orthonormalization over the real span of Hermitians."""
    rows = np.array([_embed_hermitian(h, d) for h in candidates])
    _, sv, vt = np.linalg.svd(rows, full_matrices=False)
    if sv.size == 0 or sv[0] <= 0.0:
        return []
    rank = int((sv > sv[0] * _BASIS_RANK_RTOL).sum())
    return [_unembed_hermitian(vt[i], d) for i in range(rank)]


def _fixed_hermitian_basis(channel: CtcChannel, tol: Tolerances) -> list[np.ndarray]:
    w, v = np.linalg.eig(channel.superoperator)
    sel = np.flatnonzero(np.abs(w - 1.0) <= tol.eig)
    if sel.size == 0:
        raise SolverError(
            "no eigenvalue of the channel superoperator lies within "
            f"{tol.eig:.1e} of 1")
    candidates = []
    for idx in sel:
        m = unvec(v[:, idx], channel.d_ctc)
        for part in ((m + m.conj().T) / 2.0, (m - m.conj().T) / 2.0j):
            if np.linalg.norm(part) > _EIGVEC_NORM_FLOOR:
                candidates.append(part)
    basis = _orthonormal_hermitian_basis(candidates, channel.d_ctc)
    if not basis:
        raise SolverError("fixed subspace collapsed to zero after Hermitization")
    return basis


def _cesaro_average(channel: CtcChannel, start: np.ndarray,
                    n_terms: int = CESARO_TERMS) -> np.ndarray:
    s_op = channel.superoperator
    x = vec(start)
    acc = x.copy()
    for _ in range(n_terms - 1):
        x = s_op @ x
        acc += x
    return hermitize(unvec(acc / n_terms, channel.d_ctc))


def _clean_state(rho: np.ndarray) -> np.ndarray:
    """Hermitize, clamp negative weights to zero and renormalize the trace."""
    w, v = np.linalg.eigh(hermitize(rho))
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if total <= 0.0:
        raise SolverError("candidate state has no positive weight")
    w /= total
    return (v * w) @ v.conj().T


def _traceless_directions(basis: list[np.ndarray]) -> list[np.ndarray]:
    traces = np.array([np.real(np.trace(b)) for b in basis])
    if np.linalg.norm(traces) <= 1e-12:
        raise SolverError("fixed subspace carries no trace; no state can live there")
    _, _, vt = np.linalg.svd(traces.reshape(1, -1), full_matrices=True)
    dirs = []
    for row in vt[1:]:
        dirs.append(np.tensordot(row, np.array(basis), axes=([0], [0])))
    return dirs


def _entropy_ascent(base: np.ndarray, dirs: list[np.ndarray]) -> np.ndarray:
    """Maximize entropy over {base + sum c_j dirs_j} inside the PSD cone.

    Projected gradient ascent with a backtracking line search; entropy is
    strictly concave, so any local maximum on this convex set is global.
    """
    if not dirs:
        return base
    dirs_arr = np.array(dirs)
    rho = base
    s_cur = entropy_of_weights(np.clip(np.linalg.eigvalsh(rho), 0.0, None))
    eta = 0.25
    for _ in range(MAX_ASCENT_ITERATIONS):
        w, v = np.linalg.eigh(hermitize(rho))
        log_rho = (v * np.log(np.clip(w, 1e-18, None))) @ v.conj().T
        grad = np.array([-np.real(np.trace(t @ log_rho)) for t in dirs])
        if np.linalg.norm(grad) < 1e-13:
            break
        step = eta
        improvement = 0.0
        improved = False
        direction = np.tensordot(grad, dirs_arr, axes=([0], [0]))
        while step > 1e-16:
            cand = hermitize(rho + step * direction)
            wc = np.linalg.eigvalsh(cand)
            if wc[0] >= -1e-12:
                s_new = entropy_of_weights(np.clip(wc, 0.0, None))
                if s_new > s_cur:
                    improvement = s_new - s_cur
                    rho, s_cur = cand, s_new
                    improved = True
                    break
            step /= 2.0
        if not improved:
            break
        eta = min(step * 2.0, 1.0)
        if improvement < ENTROPY_IMPROVEMENT_FLOOR:
            break
    return rho


def fixed_points(channel: CtcChannel, tol: Tolerances = DEFAULT) -> FixedPointSolution:
    """Solve the self-consistency condition and select the output state.

    Eigenvectors of the superoperator with eigenvalue within tol.eig of 1
    span the fixed operator subspace; each is Hermitized and the results
    orthonormalized under the Hilbert-Schmidt inner product. If the
    subspace is one-dimensional the unique fixed state is returned
    directly; otherwise the maximum-entropy state of the fixed set is
    found by gradient ascent from the Cesaro average of the maximally
    mixed input, which already lies in the fixed set.
    """
    basis = _fixed_hermitian_basis(channel, tol)
    unique = len(basis) == 1

    if unique:
        trace = float(np.real(np.trace(basis[0])))
        if abs(trace) <= 1e-9:
            raise SolverError("one-dimensional fixed subspace is traceless")
        candidate = basis[0] / trace
    else:
        sigma = _cesaro_average(channel, np.eye(channel.d_ctc) / channel.d_ctc)
        coeffs = [np.real(np.trace(b @ sigma)) for b in basis]
        projected = np.tensordot(np.array(coeffs), np.array(basis), axes=([0], [0]))
        projected = hermitize(projected)
        trace = float(np.real(np.trace(projected)))
        if abs(trace) <= 1e-9:
            raise SolverError("projected Cesaro average lost its trace")
        candidate = _entropy_ascent(projected / trace, _traceless_directions(basis))

    representative = _clean_state(candidate)
    residual = trace_distance(apply_channel(channel, representative), representative)
    if residual > tol.fixed:
        refined = _clean_state(_cesaro_average(channel, representative))
        refined_residual = trace_distance(apply_channel(channel, refined), refined)
        if refined_residual <= residual:
            representative, residual = refined, refined_residual
    if residual > tol.fixed:
        raise SolverError(
            f"fixed-point residual {residual:.3e} exceeds {tol.fixed:.1e}",
            best_iterate=representative)

    return FixedPointSolution(
        representative=representative,
        fixed_basis=tuple(basis),
        unique=unique,
        residual=residual,
        entropy=entropy_of_weights(np.clip(np.linalg.eigvalsh(representative),
                                           0.0, None)),
    )


def cr_output(channel: CtcChannel, rho_star, tol: Tolerances = DEFAULT) -> np.ndarray:
    """CR state after the interaction, given a self-consistent CTC state.

    Raises DomainError if rho_star is not actually a fixed point of the
    channel within tol.fixed.
    """
    rho_star = assert_density_matrix(rho_star, tol, "rho_star")
    if rho_star.shape[0] != channel.d_ctc:
        raise ShapeError(
            f"rho_star has dimension {rho_star.shape[0]}, expected {channel.d_ctc}")
    drift = trace_distance(apply_channel(channel, rho_star), rho_star)
    if drift > tol.fixed:
        raise DomainError(
            f"rho_star is not self-consistent (residual {drift:.3e} > {tol.fixed:.1e})")
    joint = channel.unitary @ tensor(channel.cr_input, rho_star) @ channel.unitary.conj().T
    return hermitize(partial_trace(joint, (channel.d_cr, channel.d_ctc), "A"))


def solve_cr_output(unitary, rho_cr, d_cr: int, d_ctc: int,
                    tol: Tolerances = DEFAULT) -> np.ndarray:
    """Convenience: build the channel, solve it, and return the CR output."""
    channel = build_channel(unitary, rho_cr, d_cr, d_ctc, tol)
    solution = fixed_points(channel, tol)
    return cr_output(channel, solution.representative, tol)


def nonlinearity_witness(unitary, rho1_cr, rho2_cr, alpha: float,
                         tol: Tolerances = DEFAULT) -> float:
    """Trace distance between mixing-then-evolving and evolving-then-mixing.

    Any nonzero value witnesses that the CR input-output map fails
    linearity; it vanishes identically for ordinary quantum channels.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    rho1 = assert_density_matrix(rho1_cr, tol, "rho1_cr")
    rho2 = assert_density_matrix(rho2_cr, tol, "rho2_cr")
    if rho1.shape != rho2.shape:
        raise ShapeError("CR inputs have different dimensions")
    d_cr = rho1.shape[0]
    u = assert_unitary(unitary, tol.ortho)
    if u.shape[0] % d_cr != 0:
        raise ShapeError(
            f"unitary dimension {u.shape[0]} is not a multiple of {d_cr}")
    d_ctc = u.shape[0] // d_cr

    blend_in = alpha * rho1 + (1.0 - alpha) * rho2
    out_blend = solve_cr_output(u, blend_in, d_cr, d_ctc, tol)
    out1 = solve_cr_output(u, rho1, d_cr, d_ctc, tol)
    out2 = solve_cr_output(u, rho2, d_cr, d_ctc, tol)
    return trace_distance(out_blend, alpha * out1 + (1.0 - alpha) * out2)


def purity_consistency_check(unitary, psi_cr, phi_ctc,
                             tol: float = DEFAULT.fixed) -> bool:
    """Does the pure product (psi, phi) satisfy self-consistency for U?

    True iff Tr_CR[U (|psi><psi| tensor |phi><phi|) U^dag] returns
    |phi><phi| within the given trace-distance tolerance.
    """
    psi = assert_pure_state(psi_cr, name="psi_cr")
    phi = assert_pure_state(phi_ctc, name="phi_ctc")
    d_cr, d_ctc = psi.size, phi.size
    u = assert_unitary(unitary)
    if u.shape[0] != d_cr * d_ctc:
        raise ShapeError(
            f"unitary of dimension {u.shape[0]} does not match {d_cr}x{d_ctc}")
    joint = u @ tensor(projector(psi), projector(phi)) @ u.conj().T
    ctc_out = partial_trace(joint, (d_cr, d_ctc), "B")
    return trace_distance(ctc_out, projector(phi)) <= tol
