import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from rslou.analyze.tails import (
    empirical_moment_curve,
    exp_moment_probe,
    hill_ks,
    hill_sweep,
    hill_tail_index,
    ks_statistic,
    tail_stats,
)
from rslou.errors import DegenerateSample


def test_hill_pareto():
    rng = np.random.default_rng(0)
    x = rng.random(1_000_000) ** (-1 / 1.2)
    assert abs(hill_tail_index(x, 10_000) - 1.2) < 0.1


def test_hill_exponential():
    x = np.random.default_rng(1).exponential(size=1_000_000)
    assert hill_tail_index(x, 10_000) > 5


def test_hill_degenerate_and_bad_k():
    with pytest.raises(DegenerateSample):
        hill_tail_index(np.full(100, 3.0), 10)
    with pytest.raises(ValueError):
        hill_tail_index(np.arange(1.0, 11.0), 10)
    with pytest.raises(ValueError):
        hill_tail_index(np.zeros(50), 5)


def test_hill_sweep_uses_absolute_values():
    x = np.random.default_rng(2).standard_t(2, size=100_000)
    ks = hill_ks(x.size)
    assert len(ks) == 10 and ks[0] == 32 and ks[-1] == 3160
    sweep = hill_sweep(x)
    assert [k for k, _ in sweep] == ks
    assert abs(np.median([v for _, v in sweep]) - 2.0) < 0.3


@given(st.integers(0, 2**32 - 1), st.floats(0.5, 4))
def test_hill_scale_invariance(seed, c):
    x = np.random.default_rng(seed).pareto(1.5, 2000) + 1
    assert hill_tail_index(c * x, 100) == pytest.approx(hill_tail_index(x, 100), rel=1e-10)
    assert hill_tail_index(x, 100) > 0


def test_moment_curve():
    zero = empirical_moment_curve(np.zeros(50), [1, 2, 3])
    assert all(m == 0 for pts in zero.values() for _, m in pts)
    g = np.random.default_rng(3).standard_normal(100_000)
    curve = empirical_moment_curve(g, [2])
    assert [n for n, _ in curve[2.0]] == [1000, 10_000, 100_000]
    assert abs(curve[2.0][-1][1] - 1.0) < 0.02


def test_exp_probe_overflow_safe():
    probe = exp_moment_probe(np.array([2000.0, 0.0]), 0.5)
    n, log_mean, mean = probe[-1]
    assert n == 2 and log_mean == pytest.approx(1000 - math.log(2)) and mean == math.inf
    small = exp_moment_probe(np.zeros(10), 0.5)
    assert small == [(10, 0.0, 1.0)]


def test_ks_statistic():
    u = np.random.default_rng(4).random(100_000)
    assert ks_statistic(u, lambda x: np.clip(x, 0, 1)) < 0.006
    assert ks_statistic(np.array([0.0]), stats.norm.cdf) == pytest.approx(0.5)
    g = np.random.default_rng(5).standard_normal(10_000)
    assert ks_statistic(g + 1.0, stats.norm.cdf) > 0.3


@given(st.integers(0, 2**32 - 1))
def test_ks_matches_scipy(seed):
    x = np.random.default_rng(seed).standard_normal(500)
    assert ks_statistic(x, stats.norm.cdf) == pytest.approx(stats.kstest(x, "norm").statistic, abs=1e-12)


def test_tail_stats_bundle():
    x = np.random.default_rng(6).standard_normal(5000)
    ts = tail_stats(x, cdf=stats.norm.cdf)
    d = ts.to_dict()
    assert d["hill_default"][0] == 70
    assert set(d["moment_curve"]) == {"1", "2", "3"}
    assert 0 <= d["ks_distance"] < 0.05
    assert tail_stats(np.zeros(0)).to_dict()["moment_curve"] == {}
