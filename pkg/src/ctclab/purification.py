"""Does purification of the CR system survive a trip past a CTC?

In ordinary quantum mechanics any mixed state can be treated as the
marginal of a pure state on a larger system. Around a closed timelike
curve the self-consistent CTC state depends on the CR input, so the
"church of the larger Hilbert space" picture is no longer free of
charge: purifying the CR input generally changes the spectrum of the
self-consistent CTC state, which an agent on the curve could notice.
The tools here quantify that: spectral recursions that any purification
must satisfy, a randomized probe for spectrum changes, the special cases
where the spectrum stays put, and the swap construction that turns CR
entanglement with a remote reference into CR-CTC entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .deutsch import build_channel, cr_output, fixed_points
from .errors import CtcLabError, DomainError, ShapeError
from .qmath import (assert_density_matrix, assert_pure_state, assert_unitary,
                    eig_hermitian, haar_unitary, identity, kron_vec,
                    partial_trace, projector, purity, rng_for, schmidt,
                    SchmidtDecomposition, spectrum, swap, tensor,
                    trace_distance)
from .sampling import extract_pure_vector, resolve_cr_state, resolve_unitary
from .tolerances import DEFAULT, Tolerances

_WEIGHT_CUTOFF = 1e-15
DEGENERACY_GAP = 1e-8
DEGENERATE_COMPARE_TOL = 1e-6
_PROBE_LABEL = "purification-probe"


# ------------------------------------------------------------------ records

@dataclass(frozen=True)
class PurificationRecord:
    """A mixed state together with its canonical purification."""

    source: np.ndarray
    purified: np.ndarray
    schmidt: SchmidtDecomposition


@dataclass(frozen=True)
class SpectrumComparison:
    spectrum_a: np.ndarray
    spectrum_b: np.ndarray
    max_abs_gap: float
    equal: bool
    tol: float


@dataclass(frozen=True)
class TheoremTrialRecord:
    """One probe trial: solved fixed point plus optional recursion check."""

    index: int
    unitary_id: str
    cr_state_id: str
    fixed_spectrum: np.ndarray | None
    recursion_spectrum: np.ndarray | None
    recursion_gap: float | None
    degenerate: bool | None
    residual: float | None
    entropy: float | None
    unique: bool | None
    fixed_subspace_dim: int | None
    gap_vs_baseline: float | None
    error: str | None


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of a universal-purification probe.

    records[0] is the baseline instance; witness_fraction is the share of
    successful trials whose fixed-point spectrum moved past tol_spec away
    from the reference spectrum, and witnessed uses the max pairwise gap.
    """

    d_cr: int
    d_ctc: int
    trials: int
    seed: int
    vary: str
    unitary_kind: str
    cr_state_kind: str
    tol_spec: float
    records: tuple[TheoremTrialRecord, ...]
    witnessed: bool
    witness_fraction: float
    max_pairwise_gap: float
    unique_fraction: float
    failures: int


@dataclass(frozen=True)
class SpecialCaseResult:
    purifiable_universally_here: bool
    reason: str
    spectrum: np.ndarray
    max_flat_gap: float
    residual: float


@dataclass(frozen=True)
class SwapEntanglementResult:
    probs: np.ndarray
    dim: int
    consistency_residual: float
    joint_purity: float
    schmidt_coefficients: np.ndarray
    expected_coefficients: np.ndarray
    max_coefficient_gap: float
    consistent: bool
    schmidt_matched: bool


# ------------------------------------------------------------ purification

def canonical_purification(rho, tol: Tolerances = DEFAULT) -> PurificationRecord:
    """Purify via the eigendecomposition against a same-size ancilla.

    rho = sum_k p_k |v_k><v_k| lifts to sum_k sqrt(p_k) |v_k>|k> with the
    ancilla in the computational basis. Weights below the noise floor are
    dropped so a numerically pure input purifies to a product vector.
    """
    rho = assert_density_matrix(rho, tol)
    w, v = eig_hermitian(rho, tol)
    amps = np.sqrt(np.where(w < _WEIGHT_CUTOFF, 0.0, w))
    purified = (v * amps).ravel(order="C")
    purified = purified / np.linalg.norm(purified)
    return PurificationRecord(
        source=rho,
        purified=purified,
        schmidt=schmidt(purified, (rho.shape[0], rho.shape[0]), tol),
    )


def pad_spectra(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Zero-pad two descending spectra to a common length."""
    n = max(a.size, b.size)
    out = []
    for w in (a, b):
        padded = np.zeros(n, dtype=float)
        padded[: w.size] = np.sort(np.real(w))[::-1]
        out.append(padded)
    return out[0], out[1]


def spectrum_gap(a: np.ndarray, b: np.ndarray) -> float:
    """Max positionwise gap between two spectra after sorting and padding."""
    pa, pb = pad_spectra(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return float(np.max(np.abs(pa - pb))) if pa.size else 0.0


def spectra_compare(rho_a, rho_b, tol_spec: float = DEFAULT.spec,
                    tol: Tolerances = DEFAULT) -> SpectrumComparison:
    """Compare the spectra of two density matrices positionwise."""
    wa = spectrum(assert_density_matrix(rho_a, tol, "rho_a"), tol)
    wb = spectrum(assert_density_matrix(rho_b, tol, "rho_b"), tol)
    gap = spectrum_gap(wa, wb)
    return SpectrumComparison(spectrum_a=wa, spectrum_b=wb, max_abs_gap=gap,
                              equal=gap <= tol_spec, tol=tol_spec)


def spectrum_degenerate(w: np.ndarray, gap_tol: float = DEGENERACY_GAP) -> bool:
    """Any two consecutive eigenvalues closer than gap_tol?"""
    w = np.sort(np.asarray(w, dtype=float))[::-1]
    return bool(w.size > 1 and np.min(-np.diff(w)) < gap_tol)


# -------------------------------------------------------------- recursions

def _schmidt_weight_update(u: np.ndarray, in_vec: np.ndarray,
                           eigvecs: np.ndarray, d_cr: int, d_ctc: int,
                           tol: Tolerances) -> np.ndarray:
    """For one joint input vector, the CTC-side weight redistribution.

    Decomposes U|in> across the CR'/CTC cut and returns the vector whose
    n-th entry is sum_m w_m |<n|b_m>|^2, with |n> the supplied eigenbasis.
    """
    out_vec = u @ in_vec
    sd = schmidt(out_vec, (d_cr, d_ctc), tol)
    weights = sd.coefficients ** 2
    overlaps = np.abs(eigvecs.conj().T @ sd.basis_b) ** 2
    return overlaps @ weights


def theorem1_recursion(unitary, psi_cr, rho_star,
                       tol: Tolerances = DEFAULT) -> np.ndarray:
    """Self-consistency of the CTC spectrum for a pure CR input.

    With rho_star = sum_k p_k |k><k| and Schmidt data of U(|psi>|k>), the
    weights must reproduce themselves:

        p_n = sum_{k,m} p_k f_m(k) |<n|u_m(k)>|^2 .

    Returns the right-hand side evaluated in the descending eigenbasis of
    rho_star; for a true fixed point it equals Spec(rho_star) entrywise.
    """
    psi = assert_pure_state(psi_cr, tol.norm, "psi_cr")
    rho_star = assert_density_matrix(rho_star, tol, "rho_star")
    d_cr, d_ctc = psi.size, rho_star.shape[0]
    u = assert_unitary(unitary, tol.ortho)
    if u.shape[0] != d_cr * d_ctc:
        raise ShapeError(
            f"unitary of dimension {u.shape[0]} does not match {d_cr}x{d_ctc}")
    p, basis = eig_hermitian(rho_star, tol)
    out = np.zeros(d_ctc)
    for k in range(d_ctc):
        if p[k] <= _WEIGHT_CUTOFF:
            continue
        out += p[k] * _schmidt_weight_update(
            u, kron_vec(psi, basis[:, k]), basis, d_cr, d_ctc, tol)
    return out


def theorem2_recursion(unitary, rho_cr, rho_star,
                       tol: Tolerances = DEFAULT) -> np.ndarray:
    """Self-consistency of the CTC spectrum for a general mixed CR input.

    Expands rho_cr = sum_i lambda_i |b_i><b_i| and accumulates

        p_n = sum_{i,k,m} p_k lambda_i g_m(i,k) |<n|c_m(i,k)>|^2

    with c_m the CTC-side Schmidt vectors of U(|b_i>|k>). Reduces to the
    pure-input recursion when rho_cr has rank one.
    """
    rho_cr = assert_density_matrix(rho_cr, tol, "rho_cr")
    rho_star = assert_density_matrix(rho_star, tol, "rho_star")
    d_cr, d_ctc = rho_cr.shape[0], rho_star.shape[0]
    u = assert_unitary(unitary, tol.ortho)
    if u.shape[0] != d_cr * d_ctc:
        raise ShapeError(
            f"unitary of dimension {u.shape[0]} does not match {d_cr}x{d_ctc}")
    lam, cr_basis = eig_hermitian(rho_cr, tol)
    p, basis = eig_hermitian(rho_star, tol)
    out = np.zeros(d_ctc)
    for i in range(d_cr):
        if lam[i] <= _WEIGHT_CUTOFF:
            continue
        for k in range(d_ctc):
            if p[k] <= _WEIGHT_CUTOFF:
                continue
            out += lam[i] * p[k] * _schmidt_weight_update(
                u, kron_vec(cr_basis[:, i], basis[:, k]), basis, d_cr, d_ctc, tol)
    return out


def recursion_gap(fixed_spectrum: np.ndarray, recursion_spectrum: np.ndarray,
                  degenerate: bool) -> float:
    """Entrywise recursion error; degenerate spectra compare multiset-sorted."""
    if degenerate:
        return spectrum_gap(fixed_spectrum, recursion_spectrum)
    return float(np.max(np.abs(np.asarray(fixed_spectrum)
                               - np.asarray(recursion_spectrum))))


# ------------------------------------------------------------------- probe

def _probe_trial(index: int, u: np.ndarray, unitary_id: str, rho: np.ndarray,
                 cr_state_id: str, psi: np.ndarray | None, d_cr: int,
                 d_ctc: int, recursion: str | None,
                 tol: Tolerances) -> TheoremTrialRecord:
    blank = dict(index=index, unitary_id=unitary_id, cr_state_id=cr_state_id,
                 fixed_spectrum=None, recursion_spectrum=None,
                 recursion_gap=None, degenerate=None, residual=None,
                 entropy=None, unique=None, fixed_subspace_dim=None,
                 gap_vs_baseline=None, error=None)
    try:
        channel = build_channel(u, rho, d_cr, d_ctc, tol)
        solution = fixed_points(channel, tol)
        fixed_spec = spectrum(solution.representative, tol)
        degenerate = spectrum_degenerate(fixed_spec)
        rec_spec = None
        rec_gap = None
        if recursion == "pure":
            vec = psi if psi is not None else extract_pure_vector(rho, tol)
            rec_spec = theorem1_recursion(u, vec, solution.representative, tol)
        elif recursion == "mixed":
            rec_spec = theorem2_recursion(u, rho, solution.representative, tol)
        if rec_spec is not None:
            rec_gap = recursion_gap(fixed_spec, rec_spec, degenerate)
        return TheoremTrialRecord(**{
            **blank,
            "fixed_spectrum": fixed_spec,
            "recursion_spectrum": rec_spec,
            "recursion_gap": rec_gap,
            "degenerate": degenerate,
            "residual": solution.residual,
            "entropy": solution.entropy,
            "unique": solution.unique,
            "fixed_subspace_dim": len(solution.fixed_basis),
        })
    except CtcLabError as exc:
        return TheoremTrialRecord(**{**blank, "error": str(exc)})


def universal_purification_probe(d_cr: int, d_ctc: int, trials: int, seed: int,
                                 vary: str = "both",
                                 tol_spec: float = DEFAULT.witness,
                                 unitary: str = "haar",
                                 cr_state: str = "mixed-random",
                                 recursion: str | None = None,
                                 tol: Tolerances = DEFAULT) -> ProbeReport:
    """Hunt for CR-input dependence of the self-consistent CTC spectrum.

    Samples a baseline instance (index 0) plus `trials` instances whose
    varied slot(s) are redrawn per trial ("CR", "U" or "both"; a slot
    whose kind is deterministic never actually changes). Each instance is
    solved; a spectrum that moves more than tol_spec from the reference
    witnesses that no input-independent purification of the CTC state can
    exist. Set recursion to "pure" or "mixed" to also evaluate the
    matching spectral recursion per trial. Solver failures are recorded
    per trial and do not abort the probe.
    """
    if vary not in ("CR", "U", "both"):
        raise DomainError(f"vary must be 'CR', 'U' or 'both', got {vary!r}")
    if recursion not in (None, "pure", "mixed"):
        raise DomainError(f"recursion must be None, 'pure' or 'mixed', got {recursion!r}")
    if trials < 1:
        raise DomainError(f"trials must be at least 1, got {trials}")

    records: list[TheoremTrialRecord] = []
    for index in range(trials + 1):
        u_index = index if vary in ("U", "both") else 0
        r_index = index if vary in ("CR", "both") else 0
        u, uid = resolve_unitary(
            unitary, d_cr, d_ctc, rng_for(seed, f"{_PROBE_LABEL}:unitary", u_index), tol)
        rho, rid, psi = resolve_cr_state(
            cr_state, d_cr, rng_for(seed, f"{_PROBE_LABEL}:cr", r_index), tol)
        records.append(_probe_trial(index, u, uid, rho, rid, psi,
                                    d_cr, d_ctc, recursion, tol))

    ok = [r for r in records if r.error is None]
    reference = next(iter(ok), None)
    finished: list[TheoremTrialRecord] = []
    for record in records:
        if (record.error is None and reference is not None
                and record.index != reference.index):
            record = replace(record, gap_vs_baseline=spectrum_gap(
                record.fixed_spectrum, reference.fixed_spectrum))
        finished.append(record)

    comparable = [r for r in finished if r.gap_vs_baseline is not None]
    witness_fraction = (
        sum(r.gap_vs_baseline > tol_spec for r in comparable) / len(comparable)
        if comparable else 0.0)
    max_pairwise = 0.0
    for i in range(len(ok)):
        for j in range(i + 1, len(ok)):
            max_pairwise = max(max_pairwise, spectrum_gap(
                ok[i].fixed_spectrum, ok[j].fixed_spectrum))
    unique_fraction = (sum(bool(r.unique) for r in ok) / len(ok)) if ok else 0.0

    return ProbeReport(
        d_cr=d_cr, d_ctc=d_ctc, trials=trials, seed=seed, vary=vary,
        unitary_kind=unitary, cr_state_kind=cr_state, tol_spec=tol_spec,
        records=tuple(finished),
        witnessed=max_pairwise > tol_spec,
        witness_fraction=witness_fraction,
        max_pairwise_gap=max_pairwise,
        unique_fraction=unique_fraction,
        failures=len(records) - len(ok),
    )


# ----------------------------------------------------------- special cases

def special_case_check(unitary, rho_cr, tol_flat: float = 1e-8,
                       tol: Tolerances = DEFAULT) -> SpecialCaseResult:
    """Is this one of the configurations whose CTC spectrum cannot move?

    Purifiable means Spec(rho_star) is flat (1/d, ..., 1/d) within
    tol_flat: a spectrum pinned at maximal mixedness cannot react to the
    CR input. The reason also notes when the interaction is a swap whose
    self-consistent state matches the CR output, the other structurally
    protected configuration.
    """
    rho_cr = assert_density_matrix(rho_cr, tol, "rho_cr")
    d_cr = rho_cr.shape[0]
    u = assert_unitary(unitary, tol.ortho)
    if u.shape[0] % d_cr != 0:
        raise ShapeError(
            f"unitary dimension {u.shape[0]} is not a multiple of {d_cr}")
    d_ctc = u.shape[0] // d_cr

    channel = build_channel(u, rho_cr, d_cr, d_ctc, tol)
    solution = fixed_points(channel, tol)
    spec = spectrum(solution.representative, tol)
    max_flat_gap = float(np.max(np.abs(spec - 1.0 / d_ctc)))
    flat = max_flat_gap <= tol_flat

    swap_matched = False
    if d_cr == d_ctc and np.max(np.abs(u - swap(d_cr))) <= 1e-10:
        out = cr_output(channel, solution.representative, tol)
        swap_matched = trace_distance(solution.representative, out) <= tol.spec

    clauses = []
    if flat:
        clauses.append("flat-spectrum")
    if swap_matched:
        clauses.append("swap-matched")
    return SpecialCaseResult(
        purifiable_universally_here=flat,
        reason="+".join(clauses) if clauses else "none",
        spectrum=spec,
        max_flat_gap=max_flat_gap,
        residual=solution.residual,
    )


# ------------------------------------------------------- swap entanglement

def swap_entanglement_scenario(schmidt_probs, d: int, seed: int,
                               tol: Tolerances = DEFAULT) -> SwapEntanglementResult:
    """Swap CR-reference entanglement onto the CTC, self-consistently.

    The CR system is entangled with a reference CR' as
    sum_k sqrt(p_k) |a_k>|k> (the a_k drawn Haar from the seed), the CTC
    state is diag(p), and CR' meets the CTC under a swap. The CTC marginal
    is unchanged (self-consistency) while the CR-CTC pair ends pure with
    Schmidt coefficients sqrt(p_k): entanglement with something outside
    the causal region has been moved onto the curve.
    """
    probs = np.asarray(schmidt_probs, dtype=float)
    if probs.ndim != 1 or probs.size != d:
        raise ShapeError(f"need {d} probabilities, got shape {probs.shape}")
    if np.any(probs < -1e-12):
        raise DomainError("probabilities must be nonnegative")
    if abs(probs.sum() - 1.0) > 1e-9:
        raise DomainError(f"probabilities sum to {probs.sum()}, expected 1")
    probs = np.clip(probs, 0.0, None)

    a_basis = haar_unitary(d, rng_for(seed, "swap-entanglement-basis", 0))
    amps = np.sqrt(probs)
    psi = np.zeros(d * d, dtype=complex)
    for k in range(d):
        psi += amps[k] * kron_vec(a_basis[:, k], np.eye(d)[k])

    rho_ctc = np.diag(probs).astype(complex)
    state = tensor(projector(psi), rho_ctc)
    u_full = tensor(identity(d), swap(d))
    after = u_full @ state @ u_full.conj().T

    ctc_after = partial_trace(after, (d * d, d), "B")
    consistency_residual = trace_distance(ctc_after, rho_ctc)

    t6 = after.reshape(d, d, d, d, d, d)
    joint = np.trace(t6, axis1=1, axis2=4).reshape(d * d, d * d)
    joint_purity = purity(joint)
    w, v = eig_hermitian(joint, tol)
    sd = schmidt(v[:, 0], (d, d), tol)

    expected = np.sort(amps)[::-1]
    pa, pb = pad_spectra(sd.coefficients, expected)
    max_gap = float(np.max(np.abs(pa - pb)))
    return SwapEntanglementResult(
        probs=probs,
        dim=d,
        consistency_residual=consistency_residual,
        joint_purity=joint_purity,
        schmidt_coefficients=sd.coefficients,
        expected_coefficients=expected,
        max_coefficient_gap=max_gap,
        consistent=consistency_residual <= 1e-10,
        schmidt_matched=(abs(joint_purity - 1.0) <= 1e-10 and max_gap <= 1e-10),
    )
