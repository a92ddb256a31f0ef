"""Recurrence and tail verdicts for the switching model.

State indices are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import PreconditionNotRecurrent
from ..model import IntegrabilityReport, RegimeModel, classify_integrability
from ..spectral import SpectralReport, spectral_report

DRIFT_TOL = 1e-12


@dataclass(frozen=True)
class RecurrenceVerdict:
    status: str  # PositiveRecurrent | Transient | Indeterminate
    reason: str
    drift_index: float
    conditions: tuple = ()

    def to_dict(self):
        return {"status": self.status, "reason": self.reason}


@dataclass(frozen=True)
class TailVerdict:
    status: str  # Heavy | Light | Unknown
    cause: str | None = None  # JumpDriven | SwitchDriven
    state: int | None = None  # i0 for JumpDriven
    reason: str = ""
    moment_threshold: float | None = None
    conditions: tuple = ()

    def label(self):
        if self.status != "Heavy":
            return self.status
        return f"Heavy(JumpDriven({self.state}))" if self.cause == "JumpDriven" else "Heavy(SwitchDriven)"

    def to_dict(self):
        return {
            "status": self.status,
            "cause": self.cause,
            "state": self.state,
            "reason": self.reason,
            "label": self.label(),
        }


@dataclass(frozen=True)
class VerdictReport:
    drift_index: float
    recurrence: RecurrenceVerdict
    tail: TailVerdict
    spectral: SpectralReport
    integrability: IntegrabilityReport
    conditions_used: list = field(default_factory=list)

    @property
    def moment_threshold(self):
        return self.tail.moment_threshold

    def to_dict(self):
        return {
            "drift_index": self.drift_index,
            "recurrence": self.recurrence.to_dict(),
            "tail": self.tail.to_dict(),
            "kappa": self.spectral.kappa,
            "moment_threshold": self.tail.moment_threshold,
            "conditions_used": [{"id": cid, "value": val} for cid, val in self.conditions_used],
            "integrability": self.integrability.to_dict(),
        }


def classify_recurrence(model: RegimeModel, tol=DRIFT_TOL, integ=None) -> RecurrenceVerdict:
    """Positive recurrent iff (a-1) and drift index < -tol; transient iff
    (a-1.5) and drift index > tol; otherwise indeterminate with a reason."""
    integ = integ or classify_integrability(model.triplet.measure, model.sigma)
    d = model.drift_index
    if d < -tol:
        conds = (("drift_index<0", True), ("a-1", integ.cond_a1))
        if integ.cond_a1:
            return RecurrenceVerdict("PositiveRecurrent", "drift index < 0 and (a-1) holds", d, conds)
        word = "unknown" if integ.cond_a1 is None else "fails"
        return RecurrenceVerdict("Indeterminate", f"(a-1) {word}", d, conds)
    if d > tol:
        conds = (("drift_index>0", True), ("a-1.5", integ.cond_a15))
        if integ.cond_a15:
            return RecurrenceVerdict("Transient", "drift index > 0 and (a-1.5) holds", d, conds)
        word = "unknown" if integ.cond_a15 is None else "fails"
        return RecurrenceVerdict("Indeterminate", f"(a-1.5) {word}", d, conds)
    return RecurrenceVerdict(
        "Indeterminate", "drift index zero - theorem silent", d, (("drift_index=0", True),)
    )


def classify_tail(model: RegimeModel, spectral: SpectralReport | None = None, integ=None) -> TailVerdict:
    """Tail of the stationary law; requires a positive recurrent model."""
    integ = integ or classify_integrability(model.triplet.measure, model.sigma)
    rec = classify_recurrence(model, integ=integ)
    if rec.status != "PositiveRecurrent":
        raise PreconditionNotRecurrent(
            f"tail classification needs a positive recurrent model; recurrence is {rec.status} ({rec.reason})"
        )
    a2 = integ.cond_a2_per_state
    for i, flag in enumerate(a2):
        if flag:
            return TailVerdict(
                "Heavy", "JumpDriven", i,
                f"(a-2) holds at state {i}",
                conditions=((f"a-2[{i}]", True),),
            )
    a2_conds = tuple((f"a-2[{i}]", flag) for i, flag in enumerate(a2))
    if any(flag is None for flag in a2):
        return TailVerdict("Unknown", reason="(a-2) undecided for some state", conditions=a2_conds)
    conds = a2_conds + (("a-4", integ.cond_a4),)
    if integ.cond_a4 is None:
        return TailVerdict("Unknown", reason="(a-4) not witnessed on the lambda grid and (a-2) fails", conditions=conds)
    amax = float(model.alpha.max())
    if amax < 0:
        return TailVerdict("Light", reason="(a-4) holds and max alpha < 0", conditions=conds + (("max_alpha<0", True),))
    if amax > 0:
        spectral = spectral or spectral_report(model.Q, model.alpha)
        k = spectral.kappa if spectral.kappa_status == "finite" else 0.0
        return TailVerdict(
            "Heavy", "SwitchDriven", None,
            f"(a-4) holds and max alpha > 0: p-th moments diverge for p > kappa v 2",
            moment_threshold=max(k, 2.0),
            conditions=conds + (("max_alpha>0", True),),
        )
    return TailVerdict("Unknown", reason="max alpha = 0 - theorem silent", conditions=conds + (("max_alpha=0", True),))


def classify(model: RegimeModel) -> VerdictReport:
    """Full verdict. When the model is not positive recurrent the tail verdict
    is ``Unknown`` carrying the precondition failure as its reason."""
    integ = classify_integrability(model.triplet.measure, model.sigma)
    spec = spectral_report(model.Q, model.alpha)
    rec = classify_recurrence(model, integ=integ)
    try:
        tail = classify_tail(model, spec, integ=integ)
    except PreconditionNotRecurrent as exc:
        tail = TailVerdict("Unknown", reason=f"PreconditionNotRecurrent: {exc}")
    used = list(rec.conditions) + [c for c in tail.conditions if c not in rec.conditions]
    return VerdictReport(rec.drift_index, rec, tail, spec, integ, used)


def kappa_or_inf(spec: SpectralReport) -> float:
    return math.inf if spec.kappa_status == "infinite" else spec.kappa
