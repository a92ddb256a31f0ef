"""Perturbed rate matrices Q_p = Q + p diag(alpha), eta_p and the moment index kappa."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .chain import stationary_distribution
from .errors import BracketFailure, DegenerateKappa, EigensolverFailure

KAPPA_TOL = 1e-8


@dataclass(frozen=True)
class SpectralReport:
    p: float
    eta_p: float
    kappa: float  # math.inf when max alpha <= 0; 0.0 when degenerate
    kappa_upper_bound: float
    kappa_status: str  # "finite", "infinite" or "degenerate"

    def to_dict(self):
        return {
            "p": self.p,
            "eta_p": self.eta_p,
            "kappa": self.kappa,
            "kappa_upper_bound": self.kappa_upper_bound,
            "kappa_status": self.kappa_status,
        }


def build_Qp(Q, alpha, p):
    return np.asarray(Q, dtype=float) + p * np.diag(np.asarray(alpha, dtype=float))


def eta_p(Q, alpha, p) -> float:
    """Negated spectral abscissa of Q_p."""
    try:
        eig = np.linalg.eigvals(build_Qp(Q, alpha, p))
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(f"eigenvalue solver failed at p={p}: {exc}") from exc
    if not np.all(np.isfinite(eig)):
        raise EigensolverFailure(f"non-finite eigenvalues at p={p}")
    return float(-np.max(eig.real))


def kappa_upper_bound(Q, alpha) -> float:
    """min{q_i / alpha_i : alpha_i > 0}, or inf when no alpha_i is positive."""
    q = -np.diag(np.asarray(Q, dtype=float))
    alpha = np.asarray(alpha, dtype=float)
    pos = alpha > 0
    return float(np.min(q[pos] / alpha[pos])) if pos.any() else math.inf


def kappa(Q, alpha, tol=KAPPA_TOL) -> float:
    """kappa = sup{p > 0 : eta_p > 0}, by bisection on the sign of eta_p.

    Returns ``inf`` when max alpha <= 0. The spectral abscissa of Q_p is convex
    in p with slope sum(mu_i alpha_i) at p = 0, so when that slope is >= 0 (and
    some alpha_i > 0) eta_p <= 0 for every p > 0; this raises
    :class:`DegenerateKappa` instead of returning 0.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.max() <= 0:
        return math.inf
    drift = float(stationary_distribution(Q).mu @ alpha)
    if drift >= 0:
        raise DegenerateKappa(
            f"sum mu_i alpha_i = {drift:.6g} >= 0 with max alpha > 0: eta_p <= 0 for all p > 0"
        )
    hi = kappa_upper_bound(Q, alpha)
    if eta_p(Q, alpha, hi) >= 0:
        raise BracketFailure(f"eta_p >= 0 at the upper bound p = {hi:.6g}")
    lo = 0.0
    # confirm eta_p > 0 somewhere in the bracket
    probe = hi / 2.0
    while eta_p(Q, alpha, probe) <= 0:
        hi = probe
        probe /= 2.0
        if probe < tol:
            raise BracketFailure("eta_p is not positive near p = 0+ despite negative drift index")
    lo = probe
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if eta_p(Q, alpha, mid) > 0:
            lo = mid
        else:
            hi = mid
    # polish inside the certified bracket; eta_p is continuous there
    f_lo, f_hi = eta_p(Q, alpha, lo), eta_p(Q, alpha, hi)
    if f_lo > 0 >= f_hi:
        return float(brentq(lambda p: eta_p(Q, alpha, p), lo, hi, xtol=1e-15))
    return 0.5 * (lo + hi)


def spectral_report(Q, alpha, p=1.0) -> SpectralReport:
    bound = kappa_upper_bound(Q, alpha)
    try:
        k = kappa(Q, alpha)
        status = "infinite" if math.isinf(k) else "finite"
    except DegenerateKappa:
        k, status = 0.0, "degenerate"
    return SpectralReport(float(p), eta_p(Q, alpha, p), k, bound, status)
