"""Simulation of (X_t, Lambda_t).

Between consecutive events (chain switches, simulated jumps, observation
times) the regime is fixed, and the OU dynamics driven by the Gaussian part
of Z are integrated exactly: over a step of length s in regime i,

    X <- e^{alpha_i s} X + b' sigma_i (e^{alpha_i s} - 1) / alpha_i
         + sqrt(a' sigma_i^2 (e^{2 alpha_i s} - 1) / (2 alpha_i)) G,

where b' = b - (compensator of the simulated jumps inside |z| < 1) and
a' = a plus, in ``compensate`` mode, the variance of the jumps below the
truncation level. Simulated jumps z are applied as X <- X + sigma_i z.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._kernels import affine_scan
from .chain import sample_chain_path
from .errors import NonFiniteState, PreconditionNotRecurrent
from .model import LevyTriplet, RegimeModel
from .rng import path_stream

OVERFLOW = 1e300
BLOCK_EVENTS = 2_000_000

_START, _OBS, _SWITCH, _JUMP, _END = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class IncrementPlan:
    epsilon_trunc: float = 0.01
    small_jump_mode: str = "compensate"  # or "drop"
    dt_max: float = 0.05

    def __post_init__(self):
        if not 0 < self.epsilon_trunc <= 1:
            raise ValueError(f"epsilon_trunc must lie in (0, 1], got {self.epsilon_trunc}")
        if self.small_jump_mode not in ("compensate", "drop"):
            raise ValueError(f"small_jump_mode must be 'compensate' or 'drop', got {self.small_jump_mode!r}")
        if not self.dt_max > 0:
            raise ValueError(f"dt_max must be positive, got {self.dt_max}")


@dataclass(frozen=True, eq=False)
class PathSample:
    """Recorded path. ``x_left`` holds left limits X_{t-} at each recorded time;
    ``jumps`` has one row (time, state, sigma_state * z) per simulated jump."""

    times: np.ndarray
    x: np.ndarray
    lam: np.ndarray
    x_left: np.ndarray
    jumps: np.ndarray = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, PathSample) and all(
            np.array_equal(getattr(self, k), getattr(other, k), equal_nan=True)
            for k in ("times", "x", "lam", "x_left", "jumps")
        )

    def to_csv(self, path):
        _write_csv(path, "time,x,state", [self.times, self.x, self.lam], ["%.17g", "%.17g", "%d"])


@dataclass(frozen=True, eq=False)
class StationarySample:
    x: np.ndarray
    state: np.ndarray
    burn_in: float
    gap: float
    seed_info: dict = field(default_factory=dict)

    def __len__(self):
        return self.x.size

    def __eq__(self, other):
        return (
            isinstance(other, StationarySample)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.state, other.state)
            and (self.burn_in, self.gap) == (other.burn_in, other.gap)
        )

    def to_csv(self, path):
        _write_csv(path, "x,state", [self.x, self.state], ["%.17g", "%d"])


def _write_csv(path, header, columns, fmt):
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns]) if columns[0].size else np.zeros((0, len(columns)))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        np.savetxt(fh, data, delimiter=",", header=header, comments="", fmt=fmt)


# -- Levy increments ---------------------------------------------------------------


def gaussian_coefficients(triplet: LevyTriplet, plan: IncrementPlan):
    """Effective (drift, variance) rates of the non-jump part of Z and the
    intensity of simulated jumps."""
    trunc = triplet.measure.truncation(plan.epsilon_trunc)
    var = triplet.a + (trunc.small_var if plan.small_jump_mode == "compensate" else 0.0)
    return triplet.b - trunc.compensator, var, trunc.rate


def sample_levy_increment(triplet: LevyTriplet, dt, plan: IncrementPlan, rng):
    """One increment of Z over ``dt``: ``(continuous_part, [(offset, size), ...])``."""
    if not 0 < dt <= plan.dt_max:
        raise ValueError(f"dt = {dt} must lie in (0, dt_max = {plan.dt_max}]")
    drift, var, rate = gaussian_coefficients(triplet, plan)
    cont = drift * dt + math.sqrt(var * dt) * rng.standard_normal()
    n = rng.poisson(rate * dt)
    offsets = np.sort(rng.random(n)) * dt
    sizes = triplet.measure.sample_jumps(rng, n, plan.epsilon_trunc)
    return float(cont), list(zip(offsets.tolist(), np.asarray(sizes, dtype=float).tolist()))


# -- path engine --------------------------------------------------------------------


def _step_coefficients(alpha, sigma, h, drift, var):
    ah = alpha * h
    mult = np.exp(ah)
    nz = alpha != 0
    safe = np.where(nz, alpha, 1.0)
    mean_coef = np.where(nz, np.expm1(ah) / safe, h)
    var_coef = np.where(nz, np.expm1(2 * ah) / (2 * safe), h)
    return mult, drift * sigma * mean_coef, np.sqrt(var * sigma * sigma * np.maximum(var_coef, 0.0))


def _evolve(model: RegimeModel, x0, i0, horizon, plan, rng, obs, record_events):
    """Run one trajectory; yields per-block arrays of recorded events."""
    chain_path = sample_chain_path(model.Q, i0, horizon, rng)
    drift, var, rate = gaussian_coefficients(model.triplet, plan)
    measure = model.triplet.measure
    switches = chain_path.switch_times
    density = rate + (switches.size + obs.size) / max(horizon, 1e-300) + 1.0
    block = max(min(horizon, BLOCK_EVENTS / density), 1e-9)
    x = float(x0)
    t0 = 0.0
    while True:
        t1 = min(t0 + block, horizon)
        last = t1 >= horizon
        sw = switches[np.searchsorted(switches, t0, "left") : np.searchsorted(switches, t1, "left")]
        ob = obs[np.searchsorted(obs, t0, "left") : np.searchsorted(obs, t1, "right" if last else "left")]
        nj = rng.poisson(rate * (t1 - t0)) if rate > 0 else 0
        jt = t0 + (t1 - t0) * np.sort(rng.random(nj))
        jz = np.asarray(measure.sample_jumps(rng, nj, plan.epsilon_trunc), dtype=float)
        times = np.concatenate([[t0], sw, ob, jt, [t1]])
        kinds = np.concatenate(
            [[_START], np.full(sw.size, _SWITCH), np.full(ob.size, _OBS), np.full(nj, _JUMP), [_END]]
        )
        zs = np.concatenate([[0.0], np.zeros(sw.size + ob.size), jz, [0.0]])
        order = np.lexsort((kinds, times))
        times, kinds, zs = times[order], kinds[order], zs[order]
        step_state = chain_path.state_at(times[:-1])
        a_i = model.alpha[step_state]
        s_i = model.sigma[step_state]
        mult, mean, sd = _step_coefficients(a_i, s_i, np.diff(times), drift, var)
        add = mean + sd * rng.standard_normal(mult.size)
        jumps = s_i * zs[1:]
        traj, bad = affine_scan(x, mult, add, jumps, OVERFLOW)
        if bad >= 0:
            state = int(chain_path.state_at(times[bad]))
            raise NonFiniteState(
                f"|X| exceeded {OVERFLOW:g} at t = {times[bad]:.6g} (state {state})",
                time=float(times[bad]),
                state=state,
            )
        keep = (kinds == _OBS) | (record_events & ((kinds == _SWITCH) | (kinds == _JUMP)))
        lam = chain_path.state_at(times)
        left = traj.copy()
        left[1:] = traj[1:] - jumps
        is_jump = kinds == _JUMP
        jump_log = np.column_stack([times[is_jump], lam[is_jump], jumps[is_jump[1:]]]) if record_events else None
        yield times[keep], traj[keep], lam[keep], left[keep], jump_log
        x = float(traj[-1])
        if last:
            break
        t0 = t1


def simulate_path(model: RegimeModel, x0, i0, horizon, plan: IncrementPlan | None = None, rng=None) -> PathSample:
    """Simulate (X, Lambda) on [0, horizon], recording a grid of spacing
    ``plan.dt_max`` together with every switch and jump time."""
    plan = plan or IncrementPlan()
    rng = rng if rng is not None else np.random.default_rng()
    grid = np.arange(0.0, horizon, plan.dt_max)
    obs = np.unique(np.concatenate([grid, [float(horizon)]]))
    parts = list(_evolve(model, x0, i0, float(horizon), plan, rng, obs, True))
    times, x, lam, left, jumps = (np.concatenate([p[k] for p in parts]) for k in range(5))
    return PathSample(times=times, x=x, lam=lam.astype(np.int64), x_left=left, jumps=jumps.reshape(-1, 3))


def sample_stationary(
    model: RegimeModel,
    burn_in,
    n_draws,
    gap,
    plan: IncrementPlan | None = None,
    rng=None,
    override=False,
    x0=0.0,
    seed_info=None,
) -> StationarySample:
    """Thin one long trajectory after ``burn_in``: draws at burn_in + k * gap."""
    if not override:
        from .analyze.verdicts import classify_recurrence

        verdict = classify_recurrence(model)
        if verdict.status != "PositiveRecurrent":
            raise PreconditionNotRecurrent(
                f"stationary sampling needs a positive recurrent model, got {verdict.status} ({verdict.reason})"
            )
    plan = plan or IncrementPlan()
    rng = rng if rng is not None else np.random.default_rng()
    n_draws = int(n_draws)
    if n_draws == 0:
        return StationarySample(np.zeros(0), np.zeros(0, dtype=np.int64), float(burn_in), float(gap), seed_info or {})
    i0 = int(rng.choice(model.N, p=model.mu))
    obs = float(burn_in) + float(gap) * np.arange(n_draws)
    horizon = float(obs[-1] + gap)
    xs, lams = [], []
    for _, x, lam, _, _ in _evolve(model, x0, i0, horizon, plan, rng, obs, False):
        xs.append(x)
        lams.append(lam)
    return StationarySample(
        np.concatenate(xs), np.concatenate(lams).astype(np.int64), float(burn_in), float(gap), seed_info or {}
    )


# -- batches -------------------------------------------------------------------------


@dataclass(frozen=True)
class BatchResult:
    terminal: np.ndarray  # X_T per path, nan where the path overflowed
    overflowed: np.ndarray


def _terminal_chunk(args):
    model, x0, i0, horizon, plan, seed, indices = args
    out = np.empty(len(indices))
    flags = np.zeros(len(indices), dtype=bool)
    for k, idx in enumerate(indices):
        try:
            path = simulate_path(model, x0, i0, horizon, plan, path_stream(seed, idx))
            out[k] = path.x[-1]
        except NonFiniteState:
            out[k] = np.nan
            flags[k] = True
    return out, flags


def default_workers():
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def simulate_batch(model, x0, i0, horizon, plan, seed, n_paths, workers=None) -> BatchResult:
    """Terminal values of ``n_paths`` independent paths. Path k uses the
    stream ``path_stream(seed, k)``, so the result does not depend on
    ``workers``."""
    workers = workers or default_workers()
    indices = np.arange(n_paths)
    chunks = [c for c in np.array_split(indices, max(1, min(workers * 4, n_paths))) if c.size]
    tasks = [(model, x0, i0, horizon, plan, seed, c.tolist()) for c in chunks]
    if workers <= 1 or len(tasks) == 1:
        results = [_terminal_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_terminal_chunk, tasks))
    return BatchResult(
        terminal=np.concatenate([r[0] for r in results]),
        overflowed=np.concatenate([r[1] for r in results]),
    )
