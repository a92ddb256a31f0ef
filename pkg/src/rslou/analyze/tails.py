"""Empirical tail diagnostics: Hill estimator, moment curves, exponential
moment probes and the Kolmogorov-Smirnov distance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from ..errors import DegenerateSample

DEFAULT_PREFIXES = (10**3, 10**4, 10**5, 10**6)


def hill_tail_index(samples, k: int) -> float:
    """Hill estimate 1 / mean_{j<=k} log(x_(j) / x_(k+1)) from the top order
    statistics of ``samples`` (sorted internally, largest first)."""
    x = np.asarray(samples, dtype=float).ravel()
    k = int(k)
    if not 1 <= k < x.size:
        raise ValueError(f"k = {k} must lie in [1, {x.size - 1}]")
    top = -np.partition(-x, k)[: k + 1]
    top = np.sort(top)[::-1]
    if not top[k] > 0:
        raise ValueError("the top k + 1 order statistics must be strictly positive")
    spacing = float(np.mean(np.log(top[:k] / top[k])))
    if spacing <= 0.0:
        raise DegenerateSample(f"log-spacings of the top {k} order statistics are all zero (ties)")
    return 1.0 / spacing


def hill_ks(n: int, count: int = 10):
    """``count`` log-spaced k values in [floor(sqrt n) / 10, 10 floor(sqrt n)],
    clipped to [1, n - 1]."""
    base = math.isqrt(n)
    lo, hi = max(1.0, base / 10), min(float(n - 1), 10.0 * base)
    ks = np.unique(np.round(np.geomspace(lo, hi, count)).astype(int))
    return [int(k) for k in ks]


def hill_sweep(samples, ks=None):
    """(k, estimate) pairs over a k-sweep (default :func:`hill_ks`) on |x|."""
    x = np.abs(np.asarray(samples, dtype=float).ravel())
    ks = hill_ks(x.size) if ks is None else ks
    out = []
    for k in ks:
        try:
            out.append((int(k), hill_tail_index(x, k)))
        except DegenerateSample:
            out.append((int(k), math.nan))
    return out


def _prefixes(n, prefixes):
    sizes = sorted({int(p) for p in prefixes if p < n} | {n})
    return [s for s in sizes if s > 0]


def empirical_moment_curve(samples, p_list, prefixes=DEFAULT_PREFIXES):
    """{p: [(n, mean |x|^p over the first n draws), ...]} at nested prefixes
    (always including the full sample)."""
    x = np.abs(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("empty sample")
    sizes = _prefixes(x.size, prefixes)
    curve = {}
    for p in p_list:
        csum = np.cumsum(x ** float(p))
        curve[float(p)] = [(n, float(csum[n - 1] / n)) for n in sizes]
    return curve


def exp_moment_probe(samples, lam, prefixes=DEFAULT_PREFIXES):
    """Running means of e^{lam |x|} at nested prefixes, as
    ``[(n, log_mean, mean)]``; ``mean`` is inf when it overflows."""
    x = np.abs(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("empty sample")
    out = []
    for n in _prefixes(x.size, prefixes):
        log_mean = float(logsumexp(lam * x[:n]) - math.log(n))
        out.append((n, log_mean, math.exp(log_mean) if log_mean < 709.0 else math.inf))
    return out


def ks_statistic(samples, cdf) -> float:
    """sup_x |F_n(x) - F(x)| evaluated at the sample points."""
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n), 0.0))


@dataclass
class TailStats:
    hill_estimates: list = field(default_factory=list)
    hill_default: tuple | None = None
    moment_curve: dict = field(default_factory=dict)
    ks_distance: float | None = None
    exp_moment_probe: list = field(default_factory=list)
    exp_probe_lambda: float | None = None

    def to_dict(self):
        return {
            "hill_estimates": [[k, v] for k, v in self.hill_estimates],
            "hill_default": list(self.hill_default) if self.hill_default else None,
            "moment_curve": {f"{p:g}": [[n, m] for n, m in pts] for p, pts in self.moment_curve.items()},
            "ks_distance": self.ks_distance,
            "exp_probe_lambda": self.exp_probe_lambda,
            "exp_moment_probe": [[n, lm, m] for n, lm, m in self.exp_moment_probe],
        }


def tail_stats(samples, p_list=(1.0, 2.0, 3.0), lam=0.5, cdf=None) -> TailStats:
    x = np.asarray(samples, dtype=float).ravel()
    stats = TailStats(exp_probe_lambda=float(lam))
    if x.size == 0:
        return stats
    if x.size >= 4:
        stats.hill_estimates = hill_sweep(x)
        k0 = math.isqrt(x.size)
        try:
            stats.hill_default = (k0, hill_tail_index(np.abs(x), k0))
        except (DegenerateSample, ValueError):
            stats.hill_default = None
    stats.moment_curve = empirical_moment_curve(x, p_list)
    stats.exp_moment_probe = exp_moment_probe(x, lam)
    if cdf is not None:
        stats.ks_distance = ks_statistic(x, cdf)
    return stats
