"""Analytic machinery for the fixed-regime process dY = alpha Y dt + sigma dZ.

The stationary characteristic function is

    cf(z) = exp( -int_0^inf Phi(e^{alpha t} sigma z) dt )
          = exp( -(1/|alpha|) int_0^1 Phi(u sigma z) / u du ),

after the substitution u = e^{alpha t}. All exponent integrals here use the
second form.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import DivergentExponent, PreconditionAlphaSign, SlowDecay
from .measures import LevyMeasure
from .model import LevyTriplet
from .quadrature import adaptive_gauss_legendre

EXPONENT_TOL = 1e-9
SERIES_CUTOFF = 1e-6


def levy_exponent(u, triplet: LevyTriplet):
    """Phi(u) = a u^2 / 2 - i b u + int (1 - e^{iuz} + iuz 1{|z|<1}) nu(dz).

    Off the real axis the exponential moment int_{|z|>=1} e^{-Im(u) z} nu(dz)
    must be finite; otherwise :class:`DivergentExponent` is raised.
    """
    arr = np.asarray(u, dtype=complex)
    measure = triplet.measure
    for c in {float(-arr.imag.max()), float(-arr.imag.min())}:
        if c != 0.0 and not measure.exp_moment_finite(c):
            raise DivergentExponent(
                f"int e^({c:g} z) nu(dz) over |z| >= 1 diverges; Phi undefined at Im(u) = {-c:g}"
            )
    val = 0.5 * triplet.a * arr * arr - 1j * triplet.b * arr + measure.jump_exponent(arr if arr.ndim else complex(arr))
    return val if np.ndim(u) else complex(val)


@lru_cache(maxsize=64)
def _small_v_series(measure: LevyMeasure):
    """(psi'(0), psi''(0)) when int |z| v z^2 nu(dz) < inf, else None."""
    if not measure.abs_sq_moment_finite():
        return None
    first = measure.integrate(lambda z: z * (np.abs(z) >= 1.0))
    second = measure.integrate(lambda z: z * z)
    return -1j * first, second


def _phi_over_v(v, triplet: LevyTriplet):
    """Phi(v) / v, using a second-order series where |v| < SERIES_CUTOFF."""
    v = np.asarray(v, dtype=complex)
    out = np.empty(v.shape, dtype=complex)
    small = np.abs(v) < SERIES_CUTOFF
    series = _small_v_series(triplet.measure) if small.any() else None
    direct = ~small if series is not None else np.ones(v.shape, dtype=bool)
    if direct.any():
        vd = v[direct]
        out[direct] = levy_exponent(vd, triplet) / vd
    if series is not None and small.any():
        d1, d2 = series
        vs = v[small]
        out[small] = -1j * triplet.b + d1 + 0.5 * (triplet.a + d2) * vs
    return out


def _exponent_integral(arg_scale, alpha, triplet, tol=EXPONENT_TOL):
    """(1/|alpha|) int_0^1 Phi(u * arg_scale) / u du."""
    if arg_scale == 0:
        return 0.0 + 0.0j
    f = lambda u: arg_scale * _phi_over_v(u * arg_scale, triplet)  # noqa: E731
    return adaptive_gauss_legendre(f, 0.0, 1.0, tol=tol * abs(alpha)) / abs(alpha)


def stationary_cf(z, alpha, sigma, triplet: LevyTriplet):
    """Characteristic function of the stationary law of dY = alpha Y dt + sigma dZ."""
    if not alpha < 0:
        raise PreconditionAlphaSign(f"stationary law needs alpha < 0, got {alpha}")
    if not triplet.measure.log_moment_finite():
        raise PreconditionAlphaSign("stationary law needs int log(1+|z|) nu(dz) < inf")
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.array([np.exp(-_exponent_integral(sigma * zz, alpha, triplet)) for zz in zs.ravel()])
    out = out.reshape(zs.shape)
    return out if np.ndim(z) else complex(out[0])


def exp_moment(lam, alpha, sigma, triplet: LevyTriplet) -> float:
    """int e^{lam x} pi(dx) for the stationary law, or inf.

    The Gaussian/drift part I1 = -a lam^2 sigma^2 / (4 alpha) - b lam sigma / alpha
    is closed form. The jump part I2 is finite iff int_{|z|>=1} (e^{lam sigma z} - 1)
    nu(dz) < inf (u -> (e^{cu} - 1)/u is increasing, so u = 1 is the worst
    case); it is decided first and only then integrated.
    """
    if not alpha < 0:
        raise PreconditionAlphaSign(f"stationary law needs alpha < 0, got {alpha}")
    if lam == 0:
        return 1.0
    c = lam * sigma
    if not triplet.measure.exp_moment_finite(c):
        return math.inf
    i1 = -triplet.a * c * c / (4 * alpha) - triplet.b * c / alpha
    jump_only = LevyTriplet(0.0, 0.0, triplet.measure)
    # Phi_jump(-i c u) is real
    i2 = -_exponent_integral(-1j * c, alpha, jump_only).real
    total = i1 + i2
    return math.exp(total) if total < 709.0 else math.inf


def invert_to_cdf(cf, x_grid, tol=1e-6, cf_floor=1e-10, z_budget=1e4, max_halvings=16):
    """Gil-Pelaez inversion F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-izx} cf(z)) / z dz.

    The integral is truncated at the first Z_max (doubling from 1) beyond which
    |cf| < ``cf_floor``, and evaluated with the trapezoid rule; the step is
    halved until successive results differ by less than ``tol``. The output is
    clamped to [0, 1] and made nondecreasing in x.
    """
    x = np.asarray(x_grid, dtype=float)
    zmax = 1.0
    while True:
        probe = np.linspace(zmax, 1.5 * zmax, 8)
        mag = np.abs(np.asarray(cf(probe)))
        if mag.max() < cf_floor:
            break
        if zmax >= z_budget:
            raise SlowDecay(
                f"|cf| = {mag.max():.3g} >= {cf_floor:g} at z = {zmax:g} (budget {z_budget:g})",
                achieved=float(mag.max()),
            )
        zmax *= 2.0

    def integrand(zs, vals):
        return np.imag(np.exp(-1j * np.outer(x, zs)) * vals[None, :]) / zs[None, :]

    delta = 1e-7
    g0 = integrand(np.array([delta]), np.asarray(cf(np.array([delta]))))[:, 0]
    h = min(0.5, math.pi / (np.abs(x).max() + 1.0) if x.size else 0.5)
    n = int(math.ceil(zmax / h))
    h = zmax / n
    zs = h * np.arange(1, n + 1)
    partial = integrand(zs, np.asarray(cf(zs))).sum(axis=1)
    prev = 0.5 - (h * (0.5 * g0 + partial)) / math.pi
    for _ in range(max_halvings):
        mids = zs - 0.5 * h
        partial = partial + integrand(mids, np.asarray(cf(mids))).sum(axis=1)
        zs = np.sort(np.concatenate([zs, mids]))
        h *= 0.5
        cur = 0.5 - (h * (0.5 * g0 + partial)) / math.pi
        if np.max(np.abs(cur - prev), initial=0.0) < tol:
            prev = cur
            break
        prev = cur
    F = np.clip(prev, 0.0, 1.0)
    order = np.argsort(x, kind="stable")
    F_sorted = np.maximum.accumulate(F[order])
    out = np.empty_like(F)
    out[order] = F_sorted
    return out


def write_cdf_csv(path, x, F):
    data = np.column_stack([np.asarray(x, dtype=float), np.asarray(F, dtype=float)])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        np.savetxt(fh, data, delimiter=",", header="x,F", comments="", fmt="%.17g")
