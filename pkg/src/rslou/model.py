"""Model types, validation, and integrability classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import chain
from .errors import (
    DimensionMismatch,
    ModelError,
    NegativeOffDiagonal,
    NonPositiveA,
    NotIrreducible,
    RowSumViolation,
    TooFewStates,
)
from .measures import LevyMeasure, ZeroMeasure, measure_from_dict

ROW_SUM_TOL = 1e-12
LAMBDA_GRID = tuple(2.0**k for k in range(10, -11, -1))


@dataclass(frozen=True)
class LevyTriplet:
    b: float = 0.0
    a: float = 1.0
    measure: LevyMeasure = field(default_factory=ZeroMeasure)

    def to_dict(self):
        return {"b": self.b, "a": self.a, "levy": self.measure.to_dict()}


@dataclass(frozen=True, eq=False)
class RegimeModel:
    """Validated (Q, alpha, sigma, triplet). Construct through :func:`validate_model`."""

    Q: np.ndarray
    alpha: np.ndarray
    sigma: np.ndarray
    triplet: LevyTriplet

    @property
    def N(self):
        return self.Q.shape[0]

    @cached_property
    def mu(self):
        return chain.stationary_distribution(self.Q).mu

    @property
    def drift_index(self):
        return float(self.mu @ self.alpha)

    def to_dict(self):
        return {
            "Q": self.Q.tolist(),
            "alpha": self.alpha.tolist(),
            "sigma": self.sigma.tolist(),
            **self.triplet.to_dict(),
        }

    def __eq__(self, other):
        return (
            isinstance(other, RegimeModel)
            and np.array_equal(self.Q, other.Q)
            and np.array_equal(self.alpha, other.alpha)
            and np.array_equal(self.sigma, other.sigma)
            and self.triplet == other.triplet
        )

    __hash__ = None


def validate_model(Q, alpha, sigma, b=0.0, a=1.0, measure=None) -> RegimeModel:
    """Check the standing assumptions and return an immutable model.

    ``measure`` may be a :class:`LevyMeasure` or its flat dictionary form.
    """
    Q = np.array(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise DimensionMismatch(f"Q must be square, got shape {Q.shape}")
    n = Q.shape[0]
    if n < 2:
        raise TooFewStates(f"need N >= 2 states, got {n}")
    if n > chain.MAX_STATES:
        raise ModelError(f"N = {n} exceeds the dense-solver limit {chain.MAX_STATES}")
    alpha = np.array(alpha, dtype=float).reshape(-1)
    sigma = np.array(sigma, dtype=float).reshape(-1)
    if alpha.size != n:
        raise DimensionMismatch(f"alpha has length {alpha.size}, expected N = {n}")
    if sigma.size != n:
        raise DimensionMismatch(f"sigma has length {sigma.size}, expected N = {n}")
    if not (np.all(np.isfinite(Q)) and np.all(np.isfinite(alpha)) and np.all(np.isfinite(sigma))):
        raise ModelError("Q, alpha and sigma must be finite")
    off = ~np.eye(n, dtype=bool)
    if np.any(Q[off] < 0):
        i, j = np.argwhere((Q < 0) & off)[0]
        raise NegativeOffDiagonal(f"Q[{i}][{j}] = {Q[i, j]} < 0")
    rows = Q.sum(axis=1)
    if np.any(np.abs(rows) > ROW_SUM_TOL):
        i = int(np.argmax(np.abs(rows)))
        raise RowSumViolation(f"row {i} of Q sums to {rows[i]:.3g}, not 0")
    if not chain.is_irreducible(Q):
        raise NotIrreducible("Q is not irreducible (rate graph not strongly connected)")
    if not (a > 0 and math.isfinite(a)):
        raise NonPositiveA(f"Gaussian coefficient a must be > 0, got {a}")
    if not math.isfinite(b):
        raise ModelError(f"drift b must be finite, got {b}")
    if measure is None:
        measure = ZeroMeasure()
    elif isinstance(measure, dict):
        measure = measure_from_dict(measure)
    else:
        measure.check()
    for arr in (Q, alpha, sigma):
        arr.setflags(write=False)
    return RegimeModel(Q, alpha, sigma, LevyTriplet(float(b), float(a), measure))


@dataclass(frozen=True)
class IntegrabilityReport:
    """Truth values of the integrability conditions. ``None`` means unknown."""

    cond_13: bool | None
    cond_a1: bool | None
    cond_a15: bool | None
    cond_a2_per_state: tuple[bool | None, ...]
    cond_a4: float | None  # largest grid witness lambda_0, or None

    def to_dict(self):
        return {
            "cond_13": self.cond_13,
            "cond_a1": self.cond_a1,
            "cond_a15": self.cond_a15,
            "cond_a2_per_state": list(self.cond_a2_per_state),
            "cond_a4": self.cond_a4,
        }


def classify_integrability(measure: LevyMeasure, sigma) -> IntegrabilityReport:
    """Decide (1.3), (a-1), (a-1.5), (a-2) per state and an (a-4) witness.

    All supported families are decided in closed form (see each family's
    ``log_moment_finite``, ``abs_sq_moment_finite`` and ``exp_abscissa``).
    (a-2) at state i holds exactly when the exponential abscissa of the
    measure in direction sign(sigma_i) is zero. The (a-4) witness is the
    largest lambda in {2^k : k = -10..10} for which lambda |sigma_i| lies
    inside both one-sided abscissas for every state.
    """
    sigma = np.asarray(sigma, dtype=float)
    a2 = []
    for s in sigma:
        if s == 0.0:
            a2.append(False)
        else:
            bound, _ = measure.exp_abscissa(1 if s > 0 else -1)
            a2.append(bound == 0.0)

    def a4_holds(lam):
        return all(
            measure.exp_moment_finite(lam * abs(s)) and measure.exp_moment_finite(-lam * abs(s))
            for s in sigma
        )

    witness = next((lam for lam in LAMBDA_GRID if a4_holds(lam)), None)
    return IntegrabilityReport(
        cond_13=measure.cond_13(),
        cond_a1=measure.log_moment_finite(),
        cond_a15=measure.abs_sq_moment_finite(),
        cond_a2_per_state=tuple(a2),
        cond_a4=witness,
    )
