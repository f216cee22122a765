"""Steenrod algebra, Ext charts and Adams spectral sequences for twisted string bordism."""

from ._tsb import (
    AbelianGroup,
    Contradiction,
    ExtChart,
    InvariantBreach,
    ModelError,
    ModuleError,
    Report,
    ScenarioError,
    StaleLocation,
    adem,
    algebra_dimension,
    basis,
    char_number,
    resolve,
    run_scenario,
    run_scenario_text,
    twist,
)

__all__ = [
    "AbelianGroup",
    "Contradiction",
    "ExtChart",
    "InvariantBreach",
    "ModelError",
    "ModuleError",
    "Report",
    "ScenarioError",
    "StaleLocation",
    "adem",
    "algebra_dimension",
    "basis",
    "char_number",
    "resolve",
    "run_scenario",
    "run_scenario_text",
    "twist",
]
