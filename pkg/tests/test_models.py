"""Config validation, record models, and schema emission."""

import json

import pytest
from pydantic import ValidationError

from ctclab import models


def _findings(raw):
    return {f.field: f.message for f in models.validate_raw_config(raw)}


def test_scenario_defaults_fill_in():
    cfg = models.ScenarioConfig(scenario="theorem1")
    assert cfg.cr_state == "pure-random"
    assert cfg.d_cr == 2 and cfg.d_ctc == 2 and cfg.trials == 1
    assert cfg.vary == "both" and cfg.alpha == 0.5
    cfg = models.ScenarioConfig(scenario="theorem2")
    assert cfg.cr_state == "mixed-random"
    cfg = models.ScenarioConfig(scenario="swap-entanglement", d_cr=4, d_ctc=4)
    assert cfg.schmidt_probs == [0.25, 0.25, 0.25, 0.25]
    assert cfg.cr_state == "maximally-mixed"


def test_explicit_cr_state_is_kept():
    cfg = models.ScenarioConfig(scenario="fixed-point",
                                cr_state="maximally-mixed")
    assert cfg.cr_state == "maximally-mixed"


def test_trials_finding_names_the_field():
    found = _findings({"scenario": "theorem1", "trials": 0})
    assert list(found) == ["trials"]


def test_sizing_finding():
    found = _findings({"scenario": "fixed-point", "d_cr": 16, "d_ctc": 8})
    assert len(found) == 1
    assert "128" in next(iter(found.values()))


def test_sizing_cap_env_override(monkeypatch):
    monkeypatch.setenv("CTC_LAB_MAX_DIM", "200")
    assert _findings({"scenario": "fixed-point", "d_cr": 16, "d_ctc": 8}) == {}
    monkeypatch.delenv("CTC_LAB_MAX_DIM")
    assert _findings({"scenario": "fixed-point", "d_cr": 16, "d_ctc": 8}) != {}


def test_valid_config_has_no_findings():
    assert models.validate_raw_config(
        {"scenario": "theorem1", "d_cr": 2, "d_ctc": 2,
         "trials": 50, "seed": 42}) == []


def test_non_object_config():
    assert _findings([1, 2]) == {
        "<root>": "configuration must be a JSON object"}


@pytest.mark.parametrize("raw", [
    {"scenario": "warp-drive"},
    {"scenario": "fixed-point", "unitary": "hadamard"},
    {"scenario": "fixed-point", "cr_state": "thermal"},
    {"scenario": "fixed-point", "unitary": "swap", "d_cr": 2, "d_ctc": 3},
    {"scenario": "theorem1", "cr_state": "mixed-random"},
    {"scenario": "theorem1", "cr_state": "maximally-mixed"},
    {"scenario": "special-cases", "d_cr": 2, "d_ctc": 3},
    {"scenario": "swap-entanglement", "d_cr": 2, "d_ctc": 3},
    {"scenario": "fixed-point", "schmidt_probs": [0.5, 0.5]},
    {"scenario": "swap-entanglement", "schmidt_probs": [0.5, 0.5, 0.0]},
    {"scenario": "swap-entanglement", "schmidt_probs": [0.9, -0.1, 0.2]},
    {"scenario": "swap-entanglement", "d_cr": 3, "d_ctc": 3,
     "schmidt_probs": [0.5, 0.4, 0.2]},
    {"scenario": "fixed-point", "tol_overrides": {"bogus": 1e-6}},
    {"scenario": "fixed-point", "tol_overrides": {"eig": -1e-6}},
    {"scenario": "fixed-point", "alpha": 1.5},
    {"scenario": "fixed-point", "seed": -1},
    {"scenario": "fixed-point", "seed": 2**64},
    {"scenario": "fixed-point", "d_cr": 1},
    {"scenario": "fixed-point", "unexpected": True},
])
def test_rejected_configs(raw):
    assert models.validate_raw_config(raw)


def test_swap_entanglement_probs_validation():
    cfg = models.ScenarioConfig(scenario="swap-entanglement", d_cr=3, d_ctc=3,
                                schmidt_probs=[0.7, 0.2, 0.1])
    assert cfg.schmidt_probs == [0.7, 0.2, 0.1]
    # the d^3 working space must respect the sizing cap
    assert models.validate_raw_config(
        {"scenario": "swap-entanglement", "d_cr": 5, "d_ctc": 5})


def test_tol_override_prefix_accepted():
    cfg = models.ScenarioConfig(scenario="fixed-point",
                                tol_overrides={"tol_eig": 1e-7})
    assert cfg.tol_overrides == {"tol_eig": 1e-7}


def test_record_union_discriminates_on_kind():
    report = models.ScenarioReport(
        config=models.ScenarioConfig(scenario="fixed-point"),
        records=[{
            "kind": "fixed-point", "trial": 1, "seed": 0,
            "unitary_id": "haar", "cr_state_id": "mixed-random",
            "fixed_spectrum": [0.5, 0.5], "entropy": 0.69,
            "residual": 1e-12, "unique": True, "fixed_subspace_dim": 1,
        }],
        summary=models.Summary(witness_fraction=0.0, max_spectrum_gap=0.0,
                               max_residual=1e-12, wall_time_ms=1.0),
    )
    assert isinstance(report.records[0], models.FixedPointRecord)
    with pytest.raises(ValidationError):
        models.ScenarioReport.model_validate({
            **report.model_dump(),
            "records": [{"kind": "mystery", "trial": 1, "seed": 0}],
        })


def test_report_format_version_is_pinned():
    with pytest.raises(ValidationError):
        models.ScenarioReport(
            format_version=2,
            config=models.ScenarioConfig(scenario="fixed-point"),
            records=[],
            summary=models.Summary(witness_fraction=0, max_spectrum_gap=0,
                                   max_residual=0, wall_time_ms=0),
        )


def test_schema_document_shape():
    doc = models.schema_document()
    assert doc["format_version"] == 1
    assert set(doc) == {"format_version", "tool_version", "config",
                        "report", "matrix", "pure_state"}
    config_text = json.dumps(doc["config"])
    for name in ("fixed-point", "theorem1", "theorem2", "swap-entanglement",
                 "nonlinearity", "special-cases"):
        assert name in config_text
    assert doc["matrix"]["required"] == ["rows", "cols", "entries"]
    assert doc["pure_state"]["required"] == ["dim", "amplitudes"]
