import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rslou.errors import (
    DimensionMismatch,
    InvalidMeasureParams,
    NegativeOffDiagonal,
    NonPositiveA,
    NotIrreducible,
    RowSumViolation,
    TooFewStates,
)
from rslou.measures import CompoundPoisson, Gaussian, Pareto, PointMass, TemperedPowerLaw, TwoSidedExponential, ZeroMeasure
from rslou.model import LAMBDA_GRID, classify_integrability, validate_model

from .helpers import PARETO_BOTH, Q2, TPL_3


def test_valid_model():
    m = validate_model(Q2, [-2, 1], [1, 1])
    assert m.N == 2
    assert m.drift_index == pytest.approx(-1.0, abs=1e-15)
    assert isinstance(m.triplet.measure, ZeroMeasure)
    with pytest.raises(ValueError):
        m.alpha[0] = 3.0


@pytest.mark.parametrize(
    "kwargs, exc",
    [
        (dict(Q=[[-1, 0.5], [2, -2]]), RowSumViolation),
        (dict(Q=[[1, -1], [2, -2]]), NegativeOffDiagonal),
        (dict(alpha=[-1, 1, 0]), DimensionMismatch),
        (dict(sigma=[1]), DimensionMismatch),
        (dict(Q=[[0.0]], alpha=[1], sigma=[1]), TooFewStates),
        (dict(a=0.0), NonPositiveA),
        (dict(a=-1.0), NonPositiveA),
        (dict(Q=[[-1, 1, 0], [1, -1, 0], [0, 1, -1]], alpha=[1, 1, 1], sigma=[1, 1, 1]), NotIrreducible),
        (dict(measure={**TPL_3, "beta_plus": 2.3}), InvalidMeasureParams),
        (dict(measure={"kind": "compound_poisson", "rate": -1, "jump": "point_mass", "z0": 1}), InvalidMeasureParams),
        (dict(measure={"kind": "compound_poisson", "rate": 1, "jump": "point_mass", "z0": 0}), InvalidMeasureParams),
        (dict(measure={"kind": "compound_poisson", "rate": 1, "jump": "pareto", "beta": 1, "scale": 0.5}), InvalidMeasureParams),
        (dict(measure={"kind": "zero", "rate": 1}), InvalidMeasureParams),
        (dict(measure={"kind": "cauchy"}), InvalidMeasureParams),
    ],
)
def test_validation_errors(kwargs, exc):
    args = dict(Q=Q2, alpha=[-2, 1], sigma=[1, 1])
    args.update(kwargs)
    with pytest.raises(exc):
        validate_model(**args)


def test_row_sum_tolerance():
    validate_model([[-1, 1 + 5e-13], [2, -2]], [-1, -1], [1, 1])
    with pytest.raises(RowSumViolation):
        validate_model([[-1, 1 + 5e-12], [2, -2]], [-1, -1], [1, 1])


def test_unknown_measure_key_is_named():
    with pytest.raises(InvalidMeasureParams, match="levy.rte"):
        validate_model(Q2, [-1, -1], [1, 1], measure={"kind": "compound_poisson", "rte": 1, "rate": 1, "jump": "gaussian"})


def test_zero_measure_report():
    rep = classify_integrability(ZeroMeasure(), [1.0, -3.0])
    assert rep.cond_13 and rep.cond_a1 and rep.cond_a15
    assert rep.cond_a2_per_state == (False, False)
    assert rep.cond_a4 == 1024.0


def test_pareto_both_sides_report():
    m = validate_model(Q2, [-1, -1], [1, 1], measure=PARETO_BOTH)
    rep = classify_integrability(m.triplet.measure, m.sigma)
    # int_1^inf z^{q-1-beta} dz < inf iff q < beta: log finite, z^2 (q = 2 > 1.5) not
    assert rep.cond_a1 is True
    assert rep.cond_a15 is False
    assert rep.cond_a2_per_state == (True, True)
    assert rep.cond_a4 is None


def test_tempered_report():
    nu = TemperedPowerLaw(1, 1, 0.5, 0.5, 3, 3)
    rep = classify_integrability(nu, [1.0, 2.0])
    assert rep.cond_a15 is True
    assert rep.cond_a2_per_state == (False, False)
    # lambda * 2 <= 3 -> largest dyadic lambda is 1
    assert rep.cond_a4 == 1.0


def test_one_sided_pareto_direction():
    nu = CompoundPoisson(1.0, Pareto(1.2, "+", 1.0))
    rep = classify_integrability(nu, [1.0, -1.0])
    # jumps only up: e^{lambda sigma z} diverges only where sigma > 0
    assert rep.cond_a2_per_state == (True, False)
    assert rep.cond_a4 is None


def test_tempered_quadrature_crosscheck():
    """int_{|z|>=1} (e^{lam sigma z} - 1) nu(dz) is finite below theta / |sigma|."""
    from scipy import integrate

    nu = TemperedPowerLaw(1, 1, 0.5, 0.5, 3, 3)
    for lam, sig in [(1.0, 2.0), (1.0, 1.0), (0.5, 2.0)]:
        c = lam * sig
        val, _ = integrate.quad(lambda z: (np.exp((c - 3) * z) - np.exp(-3 * z)) * z**-1.5, 1, np.inf)
        assert np.isfinite(val)
        assert nu.exp_moment_finite(lam * sig)
    assert not nu.exp_moment_finite(3.5)


def _measures():
    laws = st.one_of(
        st.builds(Gaussian, st.floats(-2, 2), st.floats(0.1, 3)),
        st.builds(TwoSidedExponential, st.floats(0.2, 4), st.floats(0.2, 4), st.floats(0, 1)),
        st.builds(Pareto, st.floats(0.3, 4), st.sampled_from(["+", "-", "both"]), st.floats(1, 3)),
        st.builds(PointMass, st.floats(0.1, 3) | st.floats(-3, -0.1)),
    )
    cp = st.builds(CompoundPoisson, st.floats(0.1, 5), laws)
    tpl = st.builds(
        TemperedPowerLaw,
        st.floats(0, 2), st.floats(0, 2),
        st.floats(0.1, 1.9), st.floats(0.1, 1.9),
        st.floats(0, 4), st.floats(0, 4),
    )
    return st.one_of(st.just(ZeroMeasure()), cp, tpl)


sigmas = st.lists(st.floats(-3, 3).filter(lambda s: abs(s) > 1e-3), min_size=2, max_size=4)


@given(_measures(), sigmas)
def test_integrability_invariants(nu, sigma):
    rep = classify_integrability(nu, sigma)
    assert rep.cond_13
    if rep.cond_a15:
        assert rep.cond_a1
    if rep.cond_a4 is not None:
        assert rep.cond_a4 in LAMBDA_GRID
        assert not any(rep.cond_a2_per_state)
    if any(rep.cond_a2_per_state):
        assert rep.cond_a4 is None
    doubled = classify_integrability(nu, [2 * s for s in sigma])
    assert doubled.cond_a2_per_state == rep.cond_a2_per_state


@given(sigmas)
def test_zero_measure_constant(sigma):
    ref = classify_integrability(ZeroMeasure(), [1.0] * len(sigma))
    assert classify_integrability(ZeroMeasure(), sigma) == ref
