"""Executes scenario configs as seeded sweeps and assembles reports.

Each trial i of a run draws from generators keyed by
(config.seed, "scenario:<name>:<slot>", i), so any single trial can be
reproduced in isolation and the full run is byte-stable. Trial indices
start at 1; index 0 is reserved for baseline or pinned draws.
"""

from __future__ import annotations

import csv
import io
import statistics
import time

import numpy as np

from . import deutsch, purification
from .errors import CtcLabError, DomainError
from .models import (FixedPointRecord, NonlinearityRecord, ScenarioConfig,
                     ScenarioReport, SpecialCaseRecord, Summary,
                     SwapEntanglementRecord, TheoremRecord)
from .qmath import (derived_seed, haar_unitary, identity, projector, rng_for,
                    spectrum, swap)
from .sampling import (cr_state_varies, resolve_cr_state, resolve_unitary,
                       unitary_varies)
from .tolerances import DEFAULT, Tolerances, with_overrides


def _floats(values) -> list[float] | None:
    if values is None:
        return None
    return [float(v) for v in np.asarray(values).ravel()]


def _spread(spectra: list[np.ndarray]) -> float:
    """Largest pairwise spectrum gap, via per-position ranges."""
    if len(spectra) < 2:
        return 0.0
    width = max(s.size for s in spectra)
    stacked = np.zeros((len(spectra), width))
    for i, s in enumerate(spectra):
        stacked[i, : s.size] = np.sort(np.real(s))[::-1]
    return float(np.max(stacked.max(axis=0) - stacked.min(axis=0)))


class _SlotSampler:
    """Per-trial resolution of the unitary and CR-state slots.

    Deterministic kinds (identity, swap, file payloads, maximally-mixed)
    are resolved once up front on the reserved index-0 stream; random
    kinds draw from their trial-indexed stream.
    """

    def __init__(self, config: ScenarioConfig, label: str, tol: Tolerances):
        self._config = config
        self._label = label
        self._tol = tol
        self._pinned_u = None
        self._pinned_cr = None
        if not unitary_varies(config.unitary):
            self._pinned_u = self._draw_unitary(0)
        if not cr_state_varies(config.cr_state):
            self._pinned_cr = self._draw_cr(0)

    def _draw_unitary(self, index: int):
        rng = rng_for(self._config.seed, f"{self._label}:unitary", index)
        return resolve_unitary(self._config.unitary, self._config.d_cr,
                               self._config.d_ctc, rng, self._tol)

    def _draw_cr(self, index: int):
        rng = rng_for(self._config.seed, f"{self._label}:cr", index)
        return resolve_cr_state(self._config.cr_state, self._config.d_cr,
                                rng, self._tol)

    def unitary(self, index: int):
        return self._pinned_u if self._pinned_u is not None \
            else self._draw_unitary(index)

    def cr_state(self, index: int):
        return self._pinned_cr if self._pinned_cr is not None \
            else self._draw_cr(index)


def _run_fixed_point(config: ScenarioConfig, tol: Tolerances):
    sampler = _SlotSampler(config, "scenario:fixed-point", tol)
    records = []
    spectra = []
    residuals = []
    uniques = []
    failures = 0
    for i in range(1, config.trials + 1):
        u, uid = sampler.unitary(i)
        rho, rid, _ = sampler.cr_state(i)
        base = dict(trial=i, seed=config.seed, unitary_id=uid, cr_state_id=rid)
        try:
            channel = deutsch.build_channel(u, rho, config.d_cr,
                                            config.d_ctc, tol)
            sol = deutsch.fixed_points(channel, tol)
        except CtcLabError as exc:
            failures += 1
            records.append(FixedPointRecord(**base, error=str(exc)))
            continue
        spec = spectrum(sol.representative, tol)
        spectra.append(spec)
        residuals.append(sol.residual)
        uniques.append(sol.unique)
        records.append(FixedPointRecord(
            **base,
            fixed_spectrum=_floats(spec),
            entropy=sol.entropy,
            residual=sol.residual,
            unique=sol.unique,
            fixed_subspace_dim=len(sol.fixed_basis),
        ))
    extras = {}
    if uniques:
        extras["unique_fraction"] = sum(uniques) / len(uniques)
    return records, dict(
        witness_fraction=0.0,
        max_spectrum_gap=_spread(spectra),
        max_residual=max(residuals, default=0.0),
        failures=failures,
        extras=extras,
    )


def _run_theorem(config: ScenarioConfig, tol: Tolerances, recursion: str):
    probe = purification.universal_purification_probe(
        config.d_cr, config.d_ctc, trials=config.trials, seed=config.seed,
        vary=config.vary, tol_spec=tol.witness, unitary=config.unitary,
        cr_state=config.cr_state, recursion=recursion, tol=tol)
    records = [
        TheoremRecord(
            trial=r.index,
            seed=config.seed,
            unitary_id=r.unitary_id,
            cr_state_id=r.cr_state_id,
            fixed_spectrum=_floats(r.fixed_spectrum),
            recursion_spectrum=_floats(r.recursion_spectrum),
            recursion_gap=r.recursion_gap,
            degenerate=r.degenerate,
            residual=r.residual,
            entropy=r.entropy,
            unique=r.unique,
            fixed_subspace_dim=r.fixed_subspace_dim,
            gap_vs_baseline=r.gap_vs_baseline,
            error=r.error,
        )
        for r in probe.records
    ]
    residuals = [r.residual for r in probe.records if r.residual is not None]
    rec_gaps = [r.recursion_gap for r in probe.records
                if r.recursion_gap is not None]
    extras = {
        "witnessed": 1.0 if probe.witnessed else 0.0,
        "unique_fraction": probe.unique_fraction,
    }
    if rec_gaps:
        extras["max_recursion_gap"] = max(rec_gaps)
    return records, dict(
        witness_fraction=probe.witness_fraction,
        max_spectrum_gap=probe.max_pairwise_gap,
        max_residual=max(residuals, default=0.0),
        failures=probe.failures,
        extras=extras,
    )


def _run_swap_entanglement(config: ScenarioConfig, tol: Tolerances):
    records = []
    max_gap = 0.0
    max_residual = 0.0
    passes = 0
    for i in range(1, config.trials + 1):
        res = purification.swap_entanglement_scenario(
            config.schmidt_probs, config.d_cr,
            seed=derived_seed(config.seed, "scenario:swap-entanglement", i),
            tol=tol)
        ok = res.consistent and res.schmidt_matched
        passes += ok
        max_gap = max(max_gap, res.max_coefficient_gap)
        max_residual = max(max_residual, res.consistency_residual)
        records.append(SwapEntanglementRecord(
            trial=i,
            seed=config.seed,
            probs=_floats(res.probs),
            consistency_residual=res.consistency_residual,
            joint_purity=res.joint_purity,
            schmidt_coefficients=_floats(res.schmidt_coefficients),
            expected_coefficients=_floats(res.expected_coefficients),
            max_coefficient_gap=res.max_coefficient_gap,
            consistent=res.consistent,
            schmidt_matched=res.schmidt_matched,
        ))
    return records, dict(
        witness_fraction=0.0,
        max_spectrum_gap=max_gap,
        max_residual=max_residual,
        failures=0,
        extras={"pass_fraction": passes / len(records)},
    )


def _run_nonlinearity(config: ScenarioConfig, tol: Tolerances):
    sampler = _SlotSampler(config, "scenario:nonlinearity", tol)
    records = []
    witnesses = []
    failures = 0
    for i in range(1, config.trials + 1):
        u, uid = sampler.unitary(i)
        frame = haar_unitary(config.d_cr,
                             rng_for(config.seed, "scenario:nonlinearity:states", i))
        psi, phi = frame[:, 0], frame[:, 1]
        base = dict(trial=i, seed=config.seed, unitary_id=uid,
                    alpha=config.alpha)
        try:
            witness = deutsch.nonlinearity_witness(
                u, projector(psi), projector(phi), config.alpha, tol)
        except CtcLabError as exc:
            failures += 1
            records.append(NonlinearityRecord(**base, error=str(exc)))
            continue
        witnesses.append(witness)
        records.append(NonlinearityRecord(**base, witness=witness))
    extras = {}
    if witnesses:
        extras["median_witness"] = statistics.median(witnesses)
    return records, dict(
        witness_fraction=(sum(w > tol.witness for w in witnesses)
                          / len(witnesses)) if witnesses else 0.0,
        max_spectrum_gap=max(witnesses, default=0.0),
        max_residual=0.0,
        failures=failures,
        extras=extras,
    )


def _run_special_cases(config: ScenarioConfig, tol: Tolerances):
    sampler = _SlotSampler(config, "scenario:special-cases", tol)
    d = config.d_cr
    cases = ((f"identity({d * d})", identity(d * d)), (f"swap({d})", swap(d)))
    records = []
    purifiable = 0
    max_flat = 0.0
    max_residual = 0.0
    for i in range(1, config.trials + 1):
        rho, rid, _ = sampler.cr_state(i)
        for name, u in cases:
            res = purification.special_case_check(u, rho, tol=tol)
            purifiable += res.purifiable_universally_here
            max_flat = max(max_flat, res.max_flat_gap)
            max_residual = max(max_residual, res.residual)
            records.append(SpecialCaseRecord(
                trial=i,
                seed=config.seed,
                case=name,
                cr_state_id=rid,
                purifiable_universally_here=res.purifiable_universally_here,
                reason=res.reason,
                spectrum=_floats(res.spectrum),
                max_flat_gap=res.max_flat_gap,
                residual=res.residual,
            ))
    return records, dict(
        witness_fraction=1.0 - purifiable / len(records),
        max_spectrum_gap=max_flat,
        max_residual=max_residual,
        failures=0,
        extras={"purifiable_fraction": purifiable / len(records)},
    )


def run_scenario(config: ScenarioConfig) -> ScenarioReport:
    """Execute one scenario end to end and return its report."""
    tol = with_overrides(config.tol_overrides) if config.tol_overrides \
        else DEFAULT
    start = time.perf_counter()
    if config.scenario == "fixed-point":
        records, parts = _run_fixed_point(config, tol)
    elif config.scenario == "theorem1":
        records, parts = _run_theorem(config, tol, "pure")
    elif config.scenario == "theorem2":
        records, parts = _run_theorem(config, tol, "mixed")
    elif config.scenario == "swap-entanglement":
        records, parts = _run_swap_entanglement(config, tol)
    elif config.scenario == "nonlinearity":
        records, parts = _run_nonlinearity(config, tol)
    elif config.scenario == "special-cases":
        records, parts = _run_special_cases(config, tol)
    else:
        raise DomainError(f"unknown scenario {config.scenario!r}")
    wall_ms = (time.perf_counter() - start) * 1000.0
    return ScenarioReport(config=config, records=records,
                          summary=Summary(**parts, wall_time_ms=wall_ms))


def report_to_csv(report: ScenarioReport) -> str:
    """Tabulate per-trial values: spectra, coefficients, or witnesses."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    if report.config.scenario == "nonlinearity":
        writer.writerow(["trial", "witness"])
        for rec in report.records:
            writer.writerow([rec.trial, "" if rec.witness is None else rec.witness])
        return buffer.getvalue()
    if report.config.scenario == "swap-entanglement":
        rows = [(rec.trial, rec.schmidt_coefficients) for rec in report.records]
        value = "coefficient"
    else:
        rows = []
        for rec in report.records:
            if rec.kind == "special-case":
                rows.append((rec.trial, rec.spectrum))
            else:
                rows.append((rec.trial, rec.fixed_spectrum))
        value = "eigenvalue"
    width = max((len(vals) for _, vals in rows if vals), default=0)
    writer.writerow(["trial"] + [f"{value}_{k + 1}" for k in range(width)])
    for trial, vals in rows:
        vals = vals or []
        writer.writerow([trial] + list(vals) + [""] * (width - len(vals)))
    return buffer.getvalue()
