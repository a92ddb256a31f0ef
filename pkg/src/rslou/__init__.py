"""Simulation and analysis of Ornstein-Uhlenbeck processes driven by a Levy
process with Markov regime switching."""

__version__ = "0.1.0"

from .model import LevyTriplet, RegimeModel, classify_integrability, validate_model
from .simulate import IncrementPlan, sample_stationary, simulate_batch, simulate_path
from .spectral import eta_p, kappa, spectral_report

__all__ = [
    "IncrementPlan",
    "LevyTriplet",
    "RegimeModel",
    "classify_integrability",
    "eta_p",
    "kappa",
    "sample_stationary",
    "simulate_batch",
    "simulate_path",
    "spectral_report",
    "validate_model",
]
