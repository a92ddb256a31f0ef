"""Parametric Levy measures.

Three families are supported: the zero measure, finite (compound Poisson)
measures ``rate * F`` for a handful of jump laws ``F``, and the two-sided
tempered power law with density ``c_pm |z|^(-1-beta_pm) exp(-theta_pm |z|)``
on each half-line. Each family knows, in closed form, which integrability
conditions it satisfies, its Levy-Khintchine jump exponent, and how to split
itself into simulated jumps plus a Gaussian/drift remainder.

Conventions
-----------
The jump part of the exponent is

    psi(u) = int (1 - exp(iuz) + iuz 1{|z|<1}) nu(dz),

so that the full exponent is ``a u^2 / 2 - i b u + psi(u)``.

``exp_abscissa(direction)`` returns ``(A, attained)`` where ``A`` is the
supremum of ``c >= 0`` with ``int_{direction * z >= 1} e^{c|z|} nu(dz) < inf``
and ``attained`` tells whether the supremum itself is admissible.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special, stats

from .errors import InvalidMeasureParams, QuadratureBudgetExceeded

INF = math.inf


# -- special functions -----------------------------------------------------------


def upper_gamma(a: float, x: float) -> float:
    """Non-regularised upper incomplete gamma Gamma(a, x) for x > 0 and any
    real ``a`` > -3 (negative orders via the downward recurrence)."""
    if x <= 0.0:
        raise ValueError("upper_gamma needs x > 0")
    if a > 0.0:
        return float(special.gammaincc(a, x) * special.gamma(a))
    if a == 0.0:
        return float(special.exp1(x))
    # Gamma(a, x) = (Gamma(a + 1, x) - x^a e^{-x}) / a
    return (upper_gamma(a + 1.0, x) - x**a * math.exp(-x)) / a


def lower_gamma(a: float, x: float) -> float:
    """Non-regularised lower incomplete gamma, a > 0."""
    return float(special.gammainc(a, x) * special.gamma(a))


def gen_expint(p: float, s):
    """E_p(s) = int_1^inf e^{-st} t^{-p} dt for non-integer p > 1 and Re s >= 0.

    Power series for |s| <= 2, modified Lentz continued fraction beyond.
    """
    s = np.asarray(s, dtype=complex)
    out = np.empty(s.shape, dtype=complex)
    small = np.abs(s) <= 2.0
    zero = s == 0
    if small.any():
        ss = s[small & ~zero][..., None]
        k = np.arange(40)
        series = ((-ss) ** k / special.factorial(k) / (k + 1.0 - p)).sum(axis=-1)
        out[small & ~zero] = ss[..., 0] ** (p - 1.0) * special.gamma(1.0 - p) - series
        out[zero] = 1.0 / (p - 1.0)
    big = ~small
    if big.any():
        sb = s[big]
        b = sb + p
        c = np.full(sb.shape, 1e300, dtype=complex)
        d = 1.0 / b
        h = d.copy()
        for i in range(1, 2000):
            a = -i * (p - 1.0 + i)
            b = b + 2.0
            d = 1.0 / (a * d + b)
            c = b + a / c
            step = c * d
            h = h * step
            if np.all(np.abs(step - 1.0) < 1e-16):
                break
        out[big] = h * np.exp(-sb)
    return out if out.ndim else complex(out)


# -- quadrature over densities -----------------------------------------------------


def _quad_piece(g, density, lo, hi, epsabs=1e-12):
    """Integrate g(z) * density(z) over (lo, hi); returns (value, error estimate)."""

    def fn(z):
        gz = g(z)
        # g vanishes where the caller masks z out; density may overflow there
        return 0.0 if gz == 0 else gz * density(z)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(fn, lo, hi, limit=400, epsabs=epsabs, epsrel=1e-10)
    return val, err


def _split(lo, hi, breaks):
    cuts = sorted({b for b in breaks if lo < b < hi})
    edges = [lo, *cuts, hi]
    return list(zip(edges[:-1], edges[1:]))


def _fourier_tail(density, start, u):
    """Return int_start^inf exp(iuz) density(z) dz for real u, start > 0,
    using QAWF after rescaling to unit frequency."""
    if u == 0.0:
        val, _ = integrate.quad(density, start, INF, limit=400)
        return complex(val)
    w = abs(u)
    # substitute t = w z so the oscillation frequency is 1
    fn = lambda t: density(t / w) / w  # noqa: E731
    re, _ = integrate.quad(fn, w * start, INF, weight="cos", wvar=1.0, limlst=200)
    im, _ = integrate.quad(fn, w * start, INF, weight="sin", wvar=1.0, limlst=200)
    return complex(re, math.copysign(1.0, u) * im)


# -- jump laws for compound Poisson measures ------------------------------------------


@dataclass(frozen=True)
class Gaussian:
    mean: float = 0.0
    sd: float = 1.0

    kind = "gaussian"

    def check(self):
        if not (self.sd > 0 and math.isfinite(self.sd) and math.isfinite(self.mean)):
            raise InvalidMeasureParams(f"gaussian jumps need finite mean and sd > 0, got {self}")

    def cf(self, u):
        return np.exp(1j * u * self.mean - 0.5 * self.sd**2 * u * u)

    def unit_partial_mean(self):
        lo, hi = (-1.0 - self.mean) / self.sd, (1.0 - self.mean) / self.sd
        mass = stats.norm.cdf(hi) - stats.norm.cdf(lo)
        return self.mean * mass + self.sd * (stats.norm.pdf(lo) - stats.norm.pdf(hi))

    def unit_second_moment(self):
        return self.mean**2 + self.sd**2

    def exp_abscissa(self, direction):
        return INF, True

    def log_moment_finite(self):
        return True

    def abs_sq_moment_finite(self):
        return True

    def sample(self, rng, n):
        return rng.normal(self.mean, self.sd, size=n)

    def pieces(self):
        pdf = lambda z: stats.norm.pdf(z, self.mean, self.sd)  # noqa: E731
        return [(-INF, INF, pdf)], []

    def params(self):
        return {"mean": self.mean, "sd": self.sd}


@dataclass(frozen=True)
class TwoSidedExponential:
    rate_plus: float = 1.0
    rate_minus: float = 1.0
    weight_plus: float = 0.5

    kind = "two_sided_exponential"

    def check(self):
        if not (self.rate_plus > 0 and self.rate_minus > 0):
            raise InvalidMeasureParams("two-sided exponential rates must be positive")
        if not 0.0 <= self.weight_plus <= 1.0:
            raise InvalidMeasureParams("weight_plus must lie in [0, 1]")

    def cf(self, u):
        w, rp, rm = self.weight_plus, self.rate_plus, self.rate_minus
        return w * rp / (rp - 1j * u) + (1.0 - w) * rm / (rm + 1j * u)

    def unit_partial_mean(self):
        w, rp, rm = self.weight_plus, self.rate_plus, self.rate_minus
        plus = (1.0 - math.exp(-rp) * (1.0 + rp)) / rp
        minus = (1.0 - math.exp(-rm) * (1.0 + rm)) / rm
        return w * plus - (1.0 - w) * minus

    def unit_second_moment(self):
        w = self.weight_plus
        return 2.0 * w / self.rate_plus**2 + 2.0 * (1.0 - w) / self.rate_minus**2

    def exp_abscissa(self, direction):
        if direction > 0:
            return (self.rate_plus, False) if self.weight_plus > 0 else (INF, True)
        return (self.rate_minus, False) if self.weight_plus < 1 else (INF, True)

    def log_moment_finite(self):
        return True

    def abs_sq_moment_finite(self):
        return True

    def sample(self, rng, n):
        plus = rng.random(n) < self.weight_plus
        mag = np.where(
            plus,
            rng.exponential(1.0 / self.rate_plus, n),
            rng.exponential(1.0 / self.rate_minus, n),
        )
        return np.where(plus, mag, -mag)

    def pieces(self):
        w, rp, rm = self.weight_plus, self.rate_plus, self.rate_minus
        out = []
        if w > 0:
            out.append((0.0, INF, lambda z: w * rp * np.exp(-rp * z)))
        if w < 1:
            out.append((-INF, 0.0, lambda z: (1 - w) * rm * np.exp(rm * z)))
        return out, []

    def params(self):
        return {
            "rate_plus": self.rate_plus,
            "rate_minus": self.rate_minus,
            "weight_plus": self.weight_plus,
        }


@dataclass(frozen=True)
class Pareto:
    """Pareto jumps with tail exponent ``beta`` on ``|z| >= scale``.

    ``side`` is ``"+"``, ``"-"`` or ``"both"``; with ``"both"`` each half-line
    carries probability 1/2.
    """

    beta: float = 1.5
    side: str = "+"
    scale: float = 1.0

    kind = "pareto"

    def check(self):
        if not self.beta > 0:
            raise InvalidMeasureParams(f"pareto beta must be > 0, got {self.beta}")
        if self.side not in ("+", "-", "both"):
            raise InvalidMeasureParams(f"pareto side must be '+', '-' or 'both', got {self.side!r}")
        if not self.scale >= 1.0:
            raise InvalidMeasureParams(f"pareto scale must be >= 1, got {self.scale}")

    def _weights(self):
        return {"+": (1.0, 0.0), "-": (0.0, 1.0), "both": (0.5, 0.5)}[self.side]

    def _unit_density(self, z):
        return self.beta * self.scale**self.beta * np.power(z, -1.0 - self.beta)

    def cf(self, u):
        """E exp(iuZ) = beta E_{1+beta}(-iu scale) per half-line (generalized
        exponential integral); QAWF for integer beta. Accepts arrays; returns
        inf where Im(u) points into a heavy side."""
        u_arr = np.asarray(u, dtype=complex)
        wp, wm = self._weights()
        total = np.zeros(u_arr.shape, dtype=complex)
        for w, sgn in ((wp, 1.0), (wm, -1.0)):
            if w == 0.0:
                continue
            v = sgn * u_arr
            part = np.full(v.shape, complex(INF, 0.0))
            ok = v.imag >= 0
            if float(self.beta).is_integer():
                part[ok] = [self._side_cf_quad(complex(x)) for x in v[ok]]
            else:
                part[ok] = self.beta * gen_expint(1.0 + self.beta, -1j * v[ok] * self.scale)
            with np.errstate(invalid="ignore"):
                total = total + w * part
        total = np.where(np.isinf(total.real), complex(INF, 0.0), total)
        return total if np.ndim(u) else complex(total)

    def _side_cf_quad(self, v):
        if v.imag < 0:
            return complex(INF, 0.0)
        if v.imag == 0.0:
            return _fourier_tail(self._unit_density, self.scale, v.real)
        parts = [
            integrate.quad(lambda z, f=f: f(np.exp(1j * v * z)) * self._unit_density(z), self.scale, INF, limit=400)[0]
            for f in (np.real, np.imag)
        ]
        return complex(*parts)

    def unit_partial_mean(self):
        return 0.0

    def unit_second_moment(self):
        return self.scale**2 * self.beta / (self.beta - 2.0) if self.beta > 2 else INF

    def exp_abscissa(self, direction):
        wp, wm = self._weights()
        w = wp if direction > 0 else wm
        return (0.0, True) if w > 0 else (INF, True)

    def log_moment_finite(self):
        return True

    def abs_sq_moment_finite(self):
        # |z| v |z|^2 = z^2 on the support, finite iff beta > 2
        return self.beta > 2.0

    def sample(self, rng, n):
        mag = self.scale * rng.random(n) ** (-1.0 / self.beta)
        if self.side == "+":
            return mag
        if self.side == "-":
            return -mag
        return np.where(rng.random(n) < 0.5, mag, -mag)

    def pieces(self):
        wp, wm = self._weights()
        out = []
        if wp > 0:
            out.append((self.scale, INF, lambda z: wp * self._unit_density(z)))
        if wm > 0:
            out.append((-INF, -self.scale, lambda z: wm * self._unit_density(-z)))
        return out, []

    def params(self):
        return {"beta": self.beta, "side": self.side, "scale": self.scale}


@dataclass(frozen=True)
class PointMass:
    z0: float = 1.0

    kind = "point_mass"

    def check(self):
        if self.z0 == 0 or not math.isfinite(self.z0):
            raise InvalidMeasureParams("point mass location z0 must be finite and nonzero")

    def cf(self, u):
        return np.exp(1j * u * self.z0)

    def unit_partial_mean(self):
        return self.z0 if abs(self.z0) < 1.0 else 0.0

    def unit_second_moment(self):
        return self.z0**2

    def exp_abscissa(self, direction):
        return INF, True

    def log_moment_finite(self):
        return True

    def abs_sq_moment_finite(self):
        return True

    def sample(self, rng, n):
        return np.full(n, float(self.z0))

    def pieces(self):
        return [], [(self.z0, 1.0)]

    def params(self):
        return {"z0": self.z0}


JUMP_LAWS = {cls.kind: cls for cls in (Gaussian, TwoSidedExponential, Pareto, PointMass)}


# -- measures -------------------------------------------------------------------------


@dataclass(frozen=True)
class Truncation:
    """How a measure is split for simulation at cutoff ``eps``.

    ``rate`` is the intensity of explicitly simulated jumps; ``small_var`` the
    variance rate int_{|z|<eps} z^2 nu(dz) of the jumps that are not simulated;
    ``compensator`` equals int z 1{|z|<1} nu(dz) restricted to the simulated
    jumps, i.e. the drift that Eq. (1.2)'s compensated integral removes.
    """

    rate: float
    small_var: float
    compensator: float


class LevyMeasure:
    """Common interface; see the module docstring for conventions."""

    kind: str

    def check(self):
        pass

    # integrability ---------------------------------------------------------
    def cond_13(self) -> bool:
        return True

    def log_moment_finite(self) -> bool:
        raise NotImplementedError

    def abs_sq_moment_finite(self) -> bool:
        raise NotImplementedError

    def exp_abscissa(self, direction: int) -> tuple[float, bool]:
        raise NotImplementedError

    def exp_moment_finite(self, c: float) -> bool:
        """Whether int_{|z|>=1} (e^{cz} - 1) nu(dz) < inf."""
        if c == 0.0:
            return True
        bound, attained = self.exp_abscissa(1 if c > 0 else -1)
        return abs(c) < bound or (attained and abs(c) == bound)

    # analysis ----------------------------------------------------------------
    def jump_exponent(self, u) -> complex:
        raise NotImplementedError

    def pieces(self):
        """Return ``(densities, atoms)``: a list of ``(lo, hi, density)`` and a
        list of ``(z, mass)``."""
        raise NotImplementedError

    infinite_activity = False

    def integrate(self, g: Callable, breaks=(), tol=None) -> float:
        """int g(z) nu(dz) by adaptive quadrature, split at 0, +-1 and ``breaks``.

        With ``tol`` given, raises :class:`QuadratureBudgetExceeded` when the
        summed error estimate exceeds it.
        """
        dens, atoms = self.pieces()
        total = sum(m * g(z) for z, m in atoms)
        err = 0.0
        pieces = [
            (a, b, density)
            for lo, hi, density in dens
            for a, b in _split(lo, hi, (-1.0, 0.0, 1.0, *breaks))
        ]
        for a, b, density in pieces:
            eps = 1e-12 if tol is None else tol / (4 * len(pieces))
            val, e = _quad_piece(g, density, a, b, epsabs=eps)
            total += val
            err += e
        if tol is not None and not err <= tol:
            raise QuadratureBudgetExceeded(f"quadrature error {err:.3g} exceeds tolerance {tol:.3g}")
        return total

    def second_moment_below(self, eps: float) -> float:
        """int_{|z|<eps} z^2 nu(dz)."""
        raise NotImplementedError

    # simulation --------------------------------------------------------------
    def truncation(self, eps: float) -> Truncation:
        raise NotImplementedError

    def sample_jumps(self, rng, n: int, eps: float) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ZeroMeasure(LevyMeasure):
    kind = "zero"

    def log_moment_finite(self):
        return True

    def abs_sq_moment_finite(self):
        return True

    def exp_abscissa(self, direction):
        return INF, True

    def jump_exponent(self, u):
        return 0.0 * u + 0.0j

    def pieces(self):
        return [], []

    def second_moment_below(self, eps):
        return 0.0

    def truncation(self, eps):
        return Truncation(0.0, 0.0, 0.0)

    def sample_jumps(self, rng, n, eps):
        return np.zeros(0)

    def to_dict(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class CompoundPoisson(LevyMeasure):
    """Finite measure ``rate * F``. All of its jumps are simulated exactly,
    regardless of the truncation level."""

    rate: float
    jump: Gaussian | TwoSidedExponential | Pareto | PointMass

    kind = "compound_poisson"

    def check(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise InvalidMeasureParams(f"compound Poisson rate must be positive, got {self.rate}")
        self.jump.check()

    def log_moment_finite(self):
        return self.jump.log_moment_finite()

    def abs_sq_moment_finite(self):
        return self.jump.abs_sq_moment_finite()

    def exp_abscissa(self, direction):
        return self.jump.exp_abscissa(direction)

    def jump_exponent(self, u):
        if np.ndim(u):
            u = np.asarray(u, dtype=complex)
            cf = self.jump.cf(u)
        else:
            u = complex(u)
            cf = complex(self.jump.cf(u))
        return self.rate * (1.0 - cf) + 1j * u * self.rate * self.jump.unit_partial_mean()

    def pieces(self):
        dens, atoms = self.jump.pieces()
        r = self.rate
        dens = [(lo, hi, (lambda d: (lambda z: r * d(z)))(d)) for lo, hi, d in dens]
        atoms = [(z, r * m) for z, m in atoms]
        return dens, atoms

    def second_moment_below(self, eps):
        return self.integrate(lambda z: np.where(np.abs(z) < eps, z * z, 0.0), breaks=(-eps, eps))

    def truncation(self, eps):
        return Truncation(self.rate, 0.0, self.rate * self.jump.unit_partial_mean())

    def sample_jumps(self, rng, n, eps):
        return self.jump.sample(rng, n)

    def to_dict(self):
        return {"kind": self.kind, "rate": self.rate, "jump": self.jump.kind, **self.jump.params()}


@dataclass(frozen=True)
class TemperedPowerLaw(LevyMeasure):
    c_plus: float = 1.0
    c_minus: float = 1.0
    beta_plus: float = 0.5
    beta_minus: float = 0.5
    theta_plus: float = 1.0
    theta_minus: float = 1.0

    kind = "tempered_power_law"
    infinite_activity = True

    def _sides(self):
        return (
            (1.0, self.c_plus, self.beta_plus, self.theta_plus),
            (-1.0, self.c_minus, self.beta_minus, self.theta_minus),
        )

    def check(self):
        for sgn, c, beta, theta in self._sides():
            name = "plus" if sgn > 0 else "minus"
            if not (c >= 0 and math.isfinite(c)):
                raise InvalidMeasureParams(f"c_{name} must be >= 0, got {c}")
            if not 0.0 < beta < 2.0:
                raise InvalidMeasureParams(
                    f"beta_{name}={beta} outside (0, 2): int (1 ^ z^2) nu(dz) would diverge"
                )
            if not (theta >= 0 and math.isfinite(theta)):
                raise InvalidMeasureParams(f"theta_{name} must be >= 0, got {theta}")

    def cond_13(self):
        return all(c == 0 or 0 < beta < 2 for _, c, beta, _ in self._sides())

    def log_moment_finite(self):
        # log(1+z) ~ z at 0 forces beta < 1; at infinity log z z^{-1-beta} is integrable
        return all(c == 0 or beta < 1 for _, c, beta, _ in self._sides())

    def abs_sq_moment_finite(self):
        # |z| at 0 needs beta < 1, z^2 at infinity needs tempering
        return all(c == 0 or (beta < 1 and theta > 0) for _, c, beta, theta in self._sides())

    def exp_abscissa(self, direction):
        sgn, c, _, theta = self._sides()[0 if direction > 0 else 1]
        return (theta, True) if c > 0 else (INF, True)

    # density and closed forms ---------------------------------------------------
    @staticmethod
    def _half_density(c, beta, theta):
        return lambda z: c * np.power(np.abs(z), -1.0 - beta) * np.exp(-theta * np.abs(z))

    def pieces(self):
        out = []
        for sgn, c, beta, theta in self._sides():
            if c > 0:
                lo, hi = (0.0, INF) if sgn > 0 else (-INF, 0.0)
                out.append((lo, hi, self._half_density(c, beta, theta)))
        return out, []

    @staticmethod
    def _half_exponent(u, c, beta, theta):
        """int_0^inf (1 - e^{iuz} + iuz 1{z<1}) c z^{-1-beta} e^{-theta z} dz."""
        if c == 0.0:
            return 0.0 * u + 0.0j
        s = theta - 1j * u
        if beta == 1.0:
            # d/ds of the Laplace-side integral is log(s / theta) (Frullani)
            if theta > 0:
                return -c * (s * np.log(s / theta) - s + theta) - 1j * u * c * special.exp1(theta)
            with np.errstate(divide="ignore", invalid="ignore"):
                val = 1j * u * c * (np.log(-1j * u) - 1.0 + np.euler_gamma)
            return np.where(u == 0, 0.0j, val)
        g = special.gamma(-beta)
        if beta < 1.0:
            inner = theta ** (beta - 1) * lower_gamma(1 - beta, theta) if theta > 0 else 1 / (1 - beta)
            return -c * g * (s**beta - theta**beta) + 1j * u * c * inner
        tail = theta ** (beta - 1) * upper_gamma(1 - beta, theta) if theta > 0 else 1 / (beta - 1)
        lin = beta * theta ** (beta - 1) if theta > 0 else 0.0
        return -c * g * (s**beta - theta**beta + 1j * u * lin) - 1j * u * c * tail

    def jump_exponent(self, u):
        u_arr = np.asarray(u, dtype=complex)
        out = self._half_exponent(u_arr, self.c_plus, self.beta_plus, self.theta_plus)
        out = out + self._half_exponent(-u_arr, self.c_minus, self.beta_minus, self.theta_minus)
        return out if np.ndim(u) else complex(out)

    def _side_tail_mass(self, c, beta, theta, eps):
        """int_eps^inf c z^{-1-beta} e^{-theta z} dz."""
        if c == 0.0:
            return 0.0
        if theta == 0.0:
            return c * eps ** (-beta) / beta
        return c * theta**beta * upper_gamma(-beta, theta * eps)

    def _side_small_var(self, c, beta, theta, eps):
        """int_0^eps c z^{1-beta} e^{-theta z} dz."""
        if c == 0.0:
            return 0.0
        if theta == 0.0:
            return c * eps ** (2 - beta) / (2 - beta)
        return c * theta ** (beta - 2) * lower_gamma(2 - beta, theta * eps)

    def _side_mean_between(self, c, beta, theta, eps):
        """int_eps^1 c z^{-beta} e^{-theta z} dz."""
        if c == 0.0 or eps >= 1.0:
            return 0.0
        if theta == 0.0:
            if beta == 1.0:
                return -c * math.log(eps)
            return c * (1.0 - eps ** (1 - beta)) / (1 - beta)
        a = 1.0 - beta
        return c * theta ** (-a) * (upper_gamma(a, theta * eps) - upper_gamma(a, theta))

    def second_moment_below(self, eps):
        return sum(self._side_small_var(c, b, t, eps) for _, c, b, t in self._sides())

    def truncation(self, eps):
        rate = sum(self._side_tail_mass(c, b, t, eps) for _, c, b, t in self._sides())
        comp = sum(sgn * self._side_mean_between(c, b, t, eps) for sgn, c, b, t in self._sides())
        return Truncation(rate, self.second_moment_below(eps), comp)

    def sample_jumps(self, rng, n, eps):
        sides = self._sides()
        masses = np.array([self._side_tail_mass(c, b, t, eps) for _, c, b, t in sides])
        if n == 0 or masses.sum() == 0:
            return np.zeros(n)
        plus = rng.random(n) < masses[0] / masses.sum()
        out = np.empty(n)
        for mask, (sgn, c, beta, theta) in ((plus, sides[0]), (~plus, sides[1])):
            k = int(mask.sum())
            if k:
                out[mask] = sgn * _tempered_pareto(rng, k, beta, theta, eps)
        return out

    def to_dict(self):
        return {
            "kind": self.kind,
            "c_plus": self.c_plus,
            "c_minus": self.c_minus,
            "beta_plus": self.beta_plus,
            "beta_minus": self.beta_minus,
            "theta_plus": self.theta_plus,
            "theta_minus": self.theta_minus,
        }


def _tempered_pareto(rng, n, beta, theta, eps):
    """Draw n variates from density prop. to z^{-1-beta} e^{-theta z} on [eps, inf)
    by rejection from the Pareto(beta, eps) proposal."""
    out = np.empty(n)
    filled = 0
    while filled < n:
        need = n - filled
        batch = max(16, int(need * 1.3) + 8)
        z = eps * rng.random(batch) ** (-1.0 / beta)
        keep = z[rng.random(batch) < np.exp(-theta * (z - eps))][:need]
        out[filled : filled + keep.size] = keep
        filled += keep.size
    return out


def _quadrature_exponent(measure: LevyMeasure, u):
    """psi(u) by direct quadrature of the Levy-Khintchine integrand."""
    if np.ndim(u):
        return np.array([_quadrature_exponent(measure, v) for v in np.ravel(u)]).reshape(np.shape(u))
    u = complex(u)

    def integrand(z):
        return 1.0 - np.exp(1j * u * z) + 1j * u * z * (np.abs(z) < 1.0)

    re = measure.integrate(lambda z: integrand(z).real)
    im = measure.integrate(lambda z: integrand(z).imag)
    return complex(re, im)


# -- construction from flat dictionaries -------------------------------------------------

_TPL_KEYS = ("c_plus", "c_minus", "beta_plus", "beta_minus", "theta_plus", "theta_minus")


def measure_from_dict(raw: dict) -> LevyMeasure:
    """Build a measure from its flat dictionary form (the ``[levy]`` section).

    Unknown keys raise :class:`InvalidMeasureParams` naming the key.
    """
    raw = dict(raw)
    kind = raw.pop("kind", "zero")
    if kind == "zero":
        allowed: tuple[str, ...] = ()
        measure: LevyMeasure = ZeroMeasure()
    elif kind == "compound_poisson":
        jump_kind = raw.pop("jump", None)
        if jump_kind not in JUMP_LAWS:
            raise InvalidMeasureParams(
                f"levy.jump must be one of {sorted(JUMP_LAWS)}, got {jump_kind!r}"
            )
        law = JUMP_LAWS[jump_kind]
        allowed = tuple(law.__dataclass_fields__)
        rate = raw.pop("rate", None)
        if rate is None:
            raise InvalidMeasureParams("levy.rate is required for compound_poisson")
        _reject_unknown(raw, allowed)
        measure = CompoundPoisson(float(rate), law(**{k: _num(k, v) for k, v in raw.items()}))
        raw = {}
    elif kind == "tempered_power_law":
        allowed = _TPL_KEYS
        _reject_unknown(raw, allowed)
        measure = TemperedPowerLaw(**{k: float(v) for k, v in raw.items()})
        raw = {}
    else:
        raise InvalidMeasureParams(
            f"levy.kind must be zero, compound_poisson or tempered_power_law, got {kind!r}"
        )
    _reject_unknown(raw, allowed)
    measure.check()
    return measure


def _num(key, value):
    return value if key == "side" else float(value)


def _reject_unknown(raw, allowed):
    for key in raw:
        if key not in allowed:
            raise InvalidMeasureParams(f"unknown key levy.{key}")
