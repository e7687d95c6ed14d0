"""Spectrum sharing for overlay multi-operator D2D: coverage formulas and a best-response game."""

from .config import Config, load_config
from .coverage import cellular_coverage, d2d_coverage, evaluate_rates, spectral_efficiency
from .game import best_response, feasible_region, find_equilibrium, sharing_gain, verify_properties
from .model import (
    OperatorParams,
    PathlossModel,
    Scenario,
    SharedParams,
    SpectrumPartition,
    default_scenario,
    validate_scenario,
)

__all__ = [
    "Config",
    "OperatorParams",
    "PathlossModel",
    "Scenario",
    "SharedParams",
    "SpectrumPartition",
    "best_response",
    "cellular_coverage",
    "d2d_coverage",
    "evaluate_rates",
    "feasible_region",
    "find_equilibrium",
    "load_config",
    "default_scenario",
    "sharing_gain",
    "spectral_efficiency",
    "validate_scenario",
    "verify_properties",
]
