import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rslou.analyze import classify, classify_recurrence, classify_tail
from rslou.errors import PreconditionNotRecurrent
from rslou.measures import CompoundPoisson, Gaussian, Pareto, PointMass, TemperedPowerLaw, TwoSidedExponential, ZeroMeasure
from rslou.model import RegimeModel, LevyTriplet, classify_integrability, validate_model

from .helpers import PARETO_BOTH, PARETO_PLUS_12, Q2, TPL_3, random_generator


def test_recurrence_examples():
    rec = classify_recurrence(validate_model(Q2, [-2, 1], [1, 1]))
    assert rec.status == "PositiveRecurrent"
    assert rec.drift_index == pytest.approx(-1.0, abs=1e-15)
    zero = classify_recurrence(validate_model(Q2, [-1, 2], [1, 1]))
    assert zero.status == "Indeterminate" and "drift index zero" in zero.reason
    heavy = classify_recurrence(validate_model(Q2, [2, -1], [1, 1], measure=PARETO_BOTH))
    assert heavy.status == "Indeterminate" and heavy.reason == "(a-1.5) fails"
    assert classify_recurrence(validate_model(Q2, [2, -1], [1, 1])).status == "Transient"


def test_log_moment_failure_blocks_recurrence():
    # every family here has a log moment; fake the report to reach the branch
    m = validate_model(Q2, [-2, -1], [1, 1])
    integ = classify_integrability(m.triplet.measure, m.sigma)
    broken = type(integ)(**{**integ.__dict__, "cond_a1": False})
    rec = classify_recurrence(m, integ=broken)
    assert rec.status == "Indeterminate" and rec.reason == "(a-1) fails"
    unknown = type(integ)(**{**integ.__dict__, "cond_a1": None})
    assert classify_recurrence(m, integ=unknown).reason == "(a-1) unknown"


def test_tail_examples():
    jd = classify_tail(validate_model(Q2, [-2, -1], [1, 1], measure=PARETO_PLUS_12))
    assert jd.label() == "Heavy(JumpDriven(0))"
    light = classify_tail(validate_model(Q2, [-2, -1], [1, 1], measure=TPL_3))
    assert light.status == "Light"
    sw = classify_tail(validate_model(Q2, [-2, 1], [1, 1]))
    assert sw.label() == "Heavy(SwitchDriven)"
    assert sw.moment_threshold == 2.0


def test_tail_needs_recurrence(transient_model):
    with pytest.raises(PreconditionNotRecurrent):
        classify_tail(transient_model)
    rep = classify(transient_model)
    assert rep.tail.status == "Unknown" and "PreconditionNotRecurrent" in rep.tail.reason
    assert rep.recurrence.status == "Transient"


def test_switch_driven_threshold_above_two():
    # kappa > 2 keeps kappa as the threshold
    m = validate_model([[-1, 1], [10, -10]], [-3, 0.5], [1, 1])
    rep = classify(m)
    assert rep.tail.cause == "SwitchDriven"
    assert rep.moment_threshold == pytest.approx(rep.spectral.kappa)
    assert rep.spectral.kappa > 2


def test_max_alpha_zero_unknown():
    m = validate_model(Q2, [-2, 0], [1, 1])
    t = classify_tail(m)
    assert t.status == "Unknown" and "max alpha = 0" in t.reason


def _measures():
    laws = st.one_of(
        st.builds(Gaussian, st.floats(-2, 2), st.floats(0.1, 3)),
        st.builds(TwoSidedExponential, st.floats(0.2, 4), st.floats(0.2, 4), st.floats(0, 1)),
        st.builds(Pareto, st.floats(0.3, 4), st.sampled_from(["+", "-", "both"]), st.floats(1, 3)),
        st.builds(PointMass, st.floats(0.1, 3) | st.floats(-3, -0.1)),
    )
    tpl = st.builds(
        TemperedPowerLaw,
        st.floats(0, 2), st.floats(0, 2), st.floats(0.1, 1.9), st.floats(0.1, 1.9), st.floats(0, 4), st.floats(0, 4),
    )
    return st.one_of(st.just(ZeroMeasure()), st.builds(CompoundPoisson, st.floats(0.1, 5), laws), tpl)


@st.composite
def models(draw):
    n = draw(st.integers(2, 4))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    Q = random_generator(rng, n)
    alpha = rng.uniform(-3, 2, n)
    sigma = rng.uniform(0.2, 2, n) * rng.choice([-1, 1], n)
    nu = draw(_measures())
    return RegimeModel(Q, alpha, sigma, LevyTriplet(0.3, 1.0, nu))


@given(models())
def test_verdict_soundness_and_exclusion(model):
    rep = classify(model)
    integ = rep.integrability
    if rep.recurrence.status == "PositiveRecurrent":
        assert integ.cond_a1 and rep.drift_index < 0
    if rep.recurrence.status == "Transient":
        assert integ.cond_a15 and rep.drift_index > 0
    if rep.tail.status == "Light":
        assert integ.cond_a4 is not None and model.alpha.max() < 0
        assert not any(integ.cond_a2_per_state)
    if rep.tail.cause == "JumpDriven":
        assert integ.cond_a2_per_state[rep.tail.state]
        assert integ.cond_a4 is None
    # every condition listed is reproduced by re-evaluation
    fresh = classify_integrability(model.triplet.measure, model.sigma)
    lookup = {"a-1": fresh.cond_a1, "a-1.5": fresh.cond_a15, "a-4": fresh.cond_a4}
    lookup.update({f"a-2[{i}]": v for i, v in enumerate(fresh.cond_a2_per_state)})
    for cid, val in rep.conditions_used:
        if cid in lookup:
            assert lookup[cid] == val
    # purity
    again = classify(model)
    assert again.to_dict() == rep.to_dict() or math.isnan(rep.drift_index)
