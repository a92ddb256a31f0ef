"""Generator evaluation and grid-based Lyapunov drift certificates.

For a function f of x alone, the per-regime generator is

    L^(i) f(x) = (alpha_i x + b sigma_i) f'(x) + a sigma_i^2 f''(x) / 2
                 + int [f(x + sigma_i z) - f(x) - sigma_i z f'(x) 1{|z|<1}] nu(dz).

The first line is the diffusion part D^(i) f, the integral the jump part
J^(i) f. Certificates check L^(i) f <= beta_i g on a log-spaced grid of |x|
and report the smallest grid radius beyond which the inequality holds in
every regime.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import PreconditionDelta, PreconditionEpsilon, PreconditionError
from ..model import RegimeModel

TAYLOR_CUTOFF = 1e-4


def default_grid(lo=1.0, hi=1e6, n=61):
    """Log-spaced |x| from ``lo`` to ``hi``; both signs are always checked."""
    return np.logspace(np.log10(lo), np.log10(hi), n)


def diffusion_part(df, d2f, x, i, model: RegimeModel):
    a, s = model.alpha[i], model.sigma[i]
    tr = model.triplet
    return (a * x + tr.b * s) * df(x) + 0.5 * tr.a * s * s * d2f(x)


def jump_part(f, df, d2f, x, i, model: RegimeModel):
    """J^(i) f(x) by quadrature, split at +-1 and where x + sigma_i z = 0.

    For infinite-activity measures the region |z| < TAYLOR_CUTOFF uses the
    second-order Taylor term sigma_i^2 f''(x) / 2 * int z^2 nu(dz).
    """
    measure = model.triplet.measure
    s = float(model.sigma[i])
    if s == 0.0:
        return 0.0
    fx, dfx = f(x), df(x)
    cut = TAYLOR_CUTOFF if measure.infinite_activity else 0.0

    def g(z):
        z = np.asarray(z, dtype=float)
        val = f(x + s * z) - fx - s * z * dfx * (np.abs(z) < 1.0)
        return np.where(np.abs(z) >= cut, val, 0.0)

    breaks = [-x / s] if abs(x / s) >= cut else []
    if cut:
        breaks += [-cut, cut]
    tol = 1e-9 * (1.0 + abs(fx))
    total = measure.integrate(g, breaks=tuple(breaks), tol=tol)
    if cut:
        total += 0.5 * s * s * d2f(x) * measure.second_moment_below(cut)
    return float(total)


def generator_apply(f, df, d2f, x, i, model: RegimeModel, switching=None):
    """L^(i) f(x). ``switching``, if given, is a callable ``(x, j) -> f(x, j)``
    and adds the chain term sum_j q_ij f(x, j)."""
    x = float(x)
    val = diffusion_part(df, d2f, x, i, model) + jump_part(f, df, d2f, x, i, model)
    if switching is not None:
        val += float(sum(model.Q[i, j] * switching(x, j) for j in range(model.N)))
    return float(val)


# -- closed forms with nu = 0 -----------------------------------------------------


def log_diffusion_closed_form(x, alpha, sigma, b, a):
    """D h(x) for h = log(1 + x^2)."""
    return (alpha * x + b * sigma) * 2 * x / (1 + x * x) + a * sigma**2 * (1 - x * x) / (1 + x * x) ** 2


def reciprocal_diffusion_ratio(x, alpha, sigma, b, a, delta):
    """D V(x) / V(x) for V = 1 / (delta + x^2)."""
    d = delta + x * x
    return -2 * alpha * x * x / d - 2 * b * sigma * x / d + a * sigma**2 * (3 * x * x - delta) / d**2


# -- certificates ------------------------------------------------------------------


@dataclass(frozen=True)
class DriftCertificate:
    function_id: str  # LogQuadratic | ReciprocalQuadratic
    epsilon: float
    r0: float | None  # None = not found
    per_state_margins: tuple  # worst slack beyond r0 (or over the grid if not found)
    grid_spec: dict = field(default_factory=dict)
    delta: float | None = None
    margins: np.ndarray | None = field(default=None, repr=False)  # (N, 2 * len(grid))

    @property
    def found(self):
        return self.r0 is not None

    def to_dict(self):
        return {
            "function_id": self.function_id,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "r0": self.r0 if self.r0 is not None else "not found",
            "per_state_margins": list(self.per_state_margins),
            "grid_spec": self.grid_spec,
        }


def _certify(function_id, epsilon, radii, margins, grid_spec, delta=None):
    """margins: (N, 2, n) slack at (state, sign, radius). r0 is the smallest
    radius beyond which every slack is >= 0."""
    ok = (margins >= 0).all(axis=(0, 1))
    bad = np.flatnonzero(~ok)
    if bad.size == 0:
        start = 0
    elif bad[-1] == radii.size - 1:
        start = None
    else:
        start = bad[-1] + 1
    if start is None:
        worst = margins.min(axis=(1, 2))
        r0 = None
    else:
        worst = margins[:, :, start:].min(axis=(1, 2))
        r0 = float(radii[start])
    return DriftCertificate(
        function_id,
        float(epsilon),
        r0,
        tuple(float(w) for w in worst),
        grid_spec,
        delta,
        margins.reshape(margins.shape[0], -1),
    )


def _grid_spec(radii):
    return {"kind": "logspace", "min": float(radii[0]), "max": float(radii[-1]), "n": int(radii.size), "signs": [-1, 1]}


def verify_log_drift(model: RegimeModel, epsilon, grid=None) -> DriftCertificate:
    """Check L^(i) h <= (alpha_i + epsilon) g with h = log(1 + x^2),
    g = 2 x^2 / (1 + x^2). Slack is reported as (alpha_i + epsilon) - L h / g."""
    d = model.drift_index
    if not 0 < epsilon < -d:
        raise PreconditionEpsilon(f"epsilon = {epsilon} must lie in (0, -drift index = {-d:g})")
    if not model.triplet.measure.log_moment_finite():
        raise PreconditionError("log-drift certificate needs int log(1+|z|) nu(dz) < inf")
    radii = np.sort(np.asarray(default_grid() if grid is None else grid, dtype=float))
    h = lambda y: np.log1p(np.square(y))  # noqa: E731
    dh = lambda y: 2 * y / (1 + y * y)  # noqa: E731
    d2h = lambda y: 2 * (1 - y * y) / (1 + y * y) ** 2  # noqa: E731
    margins = np.empty((model.N, 2, radii.size))
    for i in range(model.N):
        for k, sgn in enumerate((-1.0, 1.0)):
            for m, r in enumerate(radii):
                x = sgn * r
                g = 2 * x * x / (1 + x * x)
                margins[i, k, m] = (model.alpha[i] + epsilon) - generator_apply(h, dh, d2h, x, i, model) / g
    return _certify("LogQuadratic", epsilon, radii, margins, _grid_spec(radii))


def verify_reciprocal_drift(model: RegimeModel, delta, epsilon, grid=None) -> DriftCertificate:
    """Check L^(i) V <= (-2 alpha_i + epsilon) V with V = 1 / (delta + x^2).

    At each x the generator is applied to V / V(x) = (delta + x^2) / (delta + y^2),
    so slack (-2 alpha_i + epsilon) - L V / V is O(1) even where V is tiny.
    """
    if not 0 < delta < 1:
        raise PreconditionDelta(f"delta = {delta} must lie in (0, 1)")
    d = model.drift_index
    if not epsilon > 0 or (d > 0 and not epsilon < d):
        raise PreconditionEpsilon(f"epsilon = {epsilon} must lie in (0, drift index = {d:g})")
    if not model.triplet.measure.abs_sq_moment_finite():
        raise PreconditionError("reciprocal-drift certificate needs int |z| v |z|^2 nu(dz) < inf")
    radii = np.sort(np.asarray(default_grid() if grid is None else grid, dtype=float))
    margins = np.empty((model.N, 2, radii.size))
    for m, r in enumerate(radii):
        scale = delta + r * r
        f = lambda y, c=scale: c / (delta + np.square(y))  # noqa: E731
        df = lambda y, c=scale: -2 * c * y / (delta + y * y) ** 2  # noqa: E731
        d2f = lambda y, c=scale: c * (6 * y * y - 2 * delta) / (delta + y * y) ** 3  # noqa: E731
        for i in range(model.N):
            for k, sgn in enumerate((-1.0, 1.0)):
                margins[i, k, m] = (-2 * model.alpha[i] + epsilon) - generator_apply(f, df, d2f, sgn * r, i, model)
    return _certify("ReciprocalQuadratic", epsilon, radii, margins, _grid_spec(radii), delta=float(delta))
