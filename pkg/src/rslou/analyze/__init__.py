"""Theory verdicts, Lyapunov certificates and empirical tail statistics."""

from .lyapunov import DriftCertificate, generator_apply, verify_log_drift, verify_reciprocal_drift
from .tails import (
    TailStats,
    empirical_moment_curve,
    exp_moment_probe,
    hill_sweep,
    hill_tail_index,
    ks_statistic,
    tail_stats,
)
from .verdicts import VerdictReport, classify, classify_recurrence, classify_tail

__all__ = [
    "DriftCertificate",
    "TailStats",
    "VerdictReport",
    "classify",
    "classify_recurrence",
    "classify_tail",
    "empirical_moment_curve",
    "exp_moment_probe",
    "generator_apply",
    "hill_sweep",
    "hill_tail_index",
    "ks_statistic",
    "tail_stats",
    "verify_log_drift",
    "verify_reciprocal_drift",
]
