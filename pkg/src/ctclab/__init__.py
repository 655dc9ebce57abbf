"""Numerical laboratory for Deutsch-model closed timelike curve quantum
mechanics: self-consistent fixed points, purification survival probes and
the scenarios that drive them."""

__version__ = "0.1.0"

from .deutsch import (build_channel, cr_output, fixed_points,
                      nonlinearity_witness, purity_consistency_check,
                      solve_cr_output)
from .models import ScenarioConfig, ScenarioReport, validate_raw_config
from .purification import (canonical_purification, special_case_check,
                           spectra_compare, swap_entanglement_scenario,
                           theorem1_recursion, theorem2_recursion,
                           universal_purification_probe)
from .scenarios import run_scenario
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "__version__",
    "build_channel",
    "cr_output",
    "fixed_points",
    "solve_cr_output",
    "nonlinearity_witness",
    "purity_consistency_check",
    "canonical_purification",
    "spectra_compare",
    "theorem1_recursion",
    "theorem2_recursion",
    "universal_purification_probe",
    "special_case_check",
    "swap_entanglement_scenario",
    "ScenarioConfig",
    "ScenarioReport",
    "validate_raw_config",
    "run_scenario",
    "Tolerances",
    "DEFAULT",
]
