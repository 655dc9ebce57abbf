"""Configuration, per-trial record, and report models for scenario runs.

These are the wire types: the CLI and the HTTP service both accept a
ScenarioConfig and hand back a ScenarioReport. Everything is plain JSON
so reports diff cleanly and re-running a config byte-identically
reproduces every numerical field (wall_time_ms excepted).
"""

from __future__ import annotations

import math
from typing import Annotated, Literal, Union

from pydantic import (BaseModel, ConfigDict, Field, ValidationError,
                      field_validator, model_validator)

from . import __version__
from .errors import DomainError
from .qmath import dimension_cap
from .sampling import is_known_cr_state_kind, is_known_unitary_kind
from .tolerances import with_overrides

FORMAT_VERSION = 1

ScenarioName = Literal["fixed-point", "theorem1", "theorem2",
                       "swap-entanglement", "nonlinearity", "special-cases"]

_DEFAULT_CR_STATE: dict[str, str] = {
    "fixed-point": "mixed-random",
    "theorem1": "pure-random",
    "theorem2": "mixed-random",
    "swap-entanglement": "maximally-mixed",
    "nonlinearity": "pure-random",
    "special-cases": "maximally-mixed",
}

_MIXED_KINDS = ("mixed-random", "maximally-mixed")

_PROBS_SUM_TOL = 1e-9


class ScenarioConfig(BaseModel):
    """One reproducible experiment: what to run, at what size, which seed.

    cr_state defaults per scenario (pure for theorem1, mixed otherwise);
    schmidt_probs applies only to swap-entanglement and defaults to the
    flat distribution; alpha is the nonlinearity mixing weight; vary picks
    which slot the theorem probes resample per trial.
    """

    model_config = ConfigDict(extra="forbid", validate_assignment=False)

    scenario: ScenarioName
    d_cr: int = Field(default=2, ge=2)
    d_ctc: int = Field(default=2, ge=2)
    trials: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, le=2**64 - 1)
    vary: Literal["CR", "U", "both"] = "both"
    unitary: str = "haar"
    cr_state: str | None = None
    alpha: float = Field(default=0.5, ge=0.0, le=1.0)
    schmidt_probs: list[float] | None = None
    tol_overrides: dict[str, float] | None = None
    output_path: str | None = None

    @field_validator("unitary")
    @classmethod
    def _unitary_kind(cls, value: str) -> str:
        if not is_known_unitary_kind(value):
            raise ValueError(
                f"unknown unitary kind {value!r}; expected haar, swap, "
                "identity, or file:<path>")
        return value

    @field_validator("cr_state")
    @classmethod
    def _cr_state_kind(cls, value: str | None) -> str | None:
        if value is not None and not is_known_cr_state_kind(value):
            raise ValueError(
                f"unknown CR state kind {value!r}; expected pure-random, "
                "mixed-random, maximally-mixed, or file:<path>")
        return value

    @model_validator(mode="after")
    def _cross_checks(self) -> "ScenarioConfig":
        cap = dimension_cap()
        if self.d_cr * self.d_ctc > cap:
            raise ValueError(
                f"d_cr*d_ctc = {self.d_cr * self.d_ctc} exceeds the sizing "
                f"cap {cap} (override with CTC_LAB_MAX_DIM)")
        if self.cr_state is None:
            self.cr_state = _DEFAULT_CR_STATE[self.scenario]
        if self.unitary == "swap" and self.d_cr != self.d_ctc:
            raise ValueError(
                f"swap unitary needs d_cr == d_ctc, got "
                f"({self.d_cr}, {self.d_ctc})")
        if self.scenario in ("swap-entanglement", "special-cases") \
                and self.d_cr != self.d_ctc:
            raise ValueError(
                f"{self.scenario} needs d_cr == d_ctc, got "
                f"({self.d_cr}, {self.d_ctc})")
        if self.scenario == "theorem1" and self.cr_state in _MIXED_KINDS:
            raise ValueError(
                "theorem1 needs a pure CR state; use pure-random or a "
                "file: payload holding a pure density matrix")
        if self.schmidt_probs is not None \
                and self.scenario != "swap-entanglement":
            raise ValueError("schmidt_probs applies only to swap-entanglement")
        if self.scenario == "swap-entanglement":
            if self.d_cr ** 3 > cap:
                raise ValueError(
                    f"swap-entanglement builds operators of dimension "
                    f"d^3 = {self.d_cr ** 3}, above the sizing cap {cap}")
            if self.schmidt_probs is None:
                self.schmidt_probs = [1.0 / self.d_cr] * self.d_cr
            if len(self.schmidt_probs) != self.d_cr:
                raise ValueError(
                    f"schmidt_probs has {len(self.schmidt_probs)} entries, "
                    f"expected d_cr = {self.d_cr}")
            if any(p < 0.0 for p in self.schmidt_probs):
                raise ValueError("schmidt_probs entries must be nonnegative")
            if abs(math.fsum(self.schmidt_probs) - 1.0) > _PROBS_SUM_TOL:
                raise ValueError("schmidt_probs must sum to 1")
        if self.tol_overrides is not None:
            if any(v <= 0.0 for v in self.tol_overrides.values()):
                raise ValueError("tolerance overrides must be positive")
            try:
                with_overrides(self.tol_overrides)
            except DomainError as exc:
                raise ValueError(str(exc)) from exc
        return self


# ------------------------------------------------------------------ records

class _RecordBase(BaseModel):
    """Common trial fields: the run seed plus the trial index fully
    determine every random draw via the documented stream labels."""

    model_config = ConfigDict(extra="forbid")

    trial: int
    seed: int


class FixedPointRecord(_RecordBase):
    kind: Literal["fixed-point"] = "fixed-point"
    unitary_id: str
    cr_state_id: str
    fixed_spectrum: list[float] | None = None
    entropy: float | None = None
    residual: float | None = None
    unique: bool | None = None
    fixed_subspace_dim: int | None = None
    error: str | None = None


class TheoremRecord(_RecordBase):
    kind: Literal["theorem"] = "theorem"
    unitary_id: str
    cr_state_id: str
    fixed_spectrum: list[float] | None = None
    recursion_spectrum: list[float] | None = None
    recursion_gap: float | None = None
    degenerate: bool | None = None
    residual: float | None = None
    entropy: float | None = None
    unique: bool | None = None
    fixed_subspace_dim: int | None = None
    gap_vs_baseline: float | None = None
    error: str | None = None


class SwapEntanglementRecord(_RecordBase):
    kind: Literal["swap-entanglement"] = "swap-entanglement"
    probs: list[float]
    consistency_residual: float
    joint_purity: float
    schmidt_coefficients: list[float]
    expected_coefficients: list[float]
    max_coefficient_gap: float
    consistent: bool
    schmidt_matched: bool


class NonlinearityRecord(_RecordBase):
    kind: Literal["nonlinearity"] = "nonlinearity"
    unitary_id: str
    alpha: float
    witness: float | None = None
    error: str | None = None


class SpecialCaseRecord(_RecordBase):
    kind: Literal["special-case"] = "special-case"
    case: str
    cr_state_id: str
    purifiable_universally_here: bool
    reason: str
    spectrum: list[float]
    max_flat_gap: float
    residual: float


TrialRecord = Annotated[
    Union[FixedPointRecord, TheoremRecord, SwapEntanglementRecord,
          NonlinearityRecord, SpecialCaseRecord],
    Field(discriminator="kind"),
]


class Summary(BaseModel):
    """Scenario-level rollup.

    witness_fraction is the share of successful trials exhibiting the
    scenario's witness event (spectrum moved, nonlinearity above
    threshold, purification failed); max_spectrum_gap and max_residual
    aggregate the per-record values. wall_time_ms is the only field
    excluded from the determinism contract.
    """

    model_config = ConfigDict(extra="forbid")

    witness_fraction: float
    max_spectrum_gap: float
    max_residual: float
    wall_time_ms: float
    failures: int = 0
    extras: dict[str, float] = Field(default_factory=dict)


class ScenarioReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format_version: Literal[1] = FORMAT_VERSION
    tool_version: str = __version__
    config: ScenarioConfig
    records: list[TrialRecord]
    summary: Summary


# --------------------------------------------------------------- validation

class ValidationFinding(BaseModel):
    field: str
    message: str


def validate_raw_config(raw: object) -> list[ValidationFinding]:
    """Check a parsed JSON document against ScenarioConfig.

    Returns one finding per problem, each naming the offending field;
    an empty list means the config is runnable.
    """
    if not isinstance(raw, dict):
        return [ValidationFinding(field="<root>",
                                  message="configuration must be a JSON object")]
    try:
        ScenarioConfig.model_validate(raw)
    except ValidationError as exc:
        findings = []
        for err in exc.errors():
            loc = ".".join(str(part) for part in err["loc"]) or "<root>"
            findings.append(ValidationFinding(field=loc, message=err["msg"]))
        return findings
    return []


# ------------------------------------------------------------------ schemas

_COMPLEX_PAIR_SCHEMA = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
    "description": "[real, imaginary]",
}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["rows", "cols", "entries"],
    "additionalProperties": False,
    "properties": {
        "rows": {"type": "integer", "minimum": 1},
        "cols": {"type": "integer", "minimum": 1},
        "entries": {
            "type": "array",
            "items": _COMPLEX_PAIR_SCHEMA,
            "description": "row-major, rows*cols complex entries",
        },
    },
}

PURE_STATE_SCHEMA = {
    "type": "object",
    "required": ["dim", "amplitudes"],
    "additionalProperties": False,
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "amplitudes": {"type": "array", "items": _COMPLEX_PAIR_SCHEMA},
    },
}


def schema_document() -> dict:
    """All JSON schemas the tool reads or writes, in one document."""
    return {
        "format_version": FORMAT_VERSION,
        "tool_version": __version__,
        "config": ScenarioConfig.model_json_schema(),
        "report": ScenarioReport.model_json_schema(),
        "matrix": MATRIX_SCHEMA,
        "pure_state": PURE_STATE_SCHEMA,
    }
