"""Continuous-time Markov chain on a finite state space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import chain_kernel
from .errors import SingularSystem

MAX_STATES = 64


@dataclass(frozen=True)
class ChainPath:
    """Piecewise-constant chain trajectory on [0, horizon).

    ``states[k]`` is occupied on ``[switch_times[k-1], switch_times[k])`` with
    ``switch_times[-1] := 0`` and the last state lasting until ``horizon``.
    """

    switch_times: np.ndarray
    states: np.ndarray
    horizon: float

    def state_at(self, t):
        """State occupied at time(s) ``t`` (right-continuous)."""
        return self.states[np.searchsorted(self.switch_times, t, side="right")]

    def occupation(self, nstates):
        """Fraction of [0, horizon) spent in each state."""
        edges = np.concatenate([[0.0], self.switch_times, [self.horizon]])
        out = np.zeros(nstates)
        np.add.at(out, self.states, np.diff(edges))
        return out / self.horizon if self.horizon > 0 else out

    def __eq__(self, other):
        return (
            isinstance(other, ChainPath)
            and self.horizon == other.horizon
            and np.array_equal(self.switch_times, other.switch_times)
            and np.array_equal(self.states, other.states)
        )


@dataclass(frozen=True)
class StationaryLaw:
    mu: np.ndarray
    residual: float


def is_irreducible(Q) -> bool:
    """True iff the directed graph {(i, j) : q_ij > 0} is strongly connected."""
    Q = np.asarray(Q, dtype=float)
    adj = (Q > 0) & ~np.eye(Q.shape[0], dtype=bool)

    def reach(a):
        seen = np.zeros(a.shape[0], dtype=bool)
        seen[0] = True
        frontier = seen.copy()
        while frontier.any():
            nxt = a[frontier].any(axis=0) & ~seen
            seen |= nxt
            frontier = nxt
        return seen.all()

    return bool(reach(adj) and reach(adj.T))


def stationary_distribution(Q) -> StationaryLaw:
    """Solve mu Q = 0, sum(mu) = 1 with the normalisation replacing one equation."""
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    A = Q.T.copy()
    A[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    try:
        mu = np.linalg.solve(A, rhs)
        # one step of iterative refinement
        mu = mu + np.linalg.solve(A, rhs - A @ mu)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"stationary system is singular: {exc}") from exc
    if not np.all(np.isfinite(mu)) or np.any(mu <= 0):
        raise SingularSystem(f"stationary solve gave non-positive weights {mu}; is Q irreducible?")
    mu = mu / mu.sum()
    return StationaryLaw(mu=mu, residual=float(np.max(np.abs(mu @ Q))))


def jump_chain(Q):
    """Holding rates q_i and cumulative jump probabilities (rows normalised)."""
    Q = np.asarray(Q, dtype=float)
    rates = -np.diag(Q).copy()
    off = np.where(np.eye(Q.shape[0], dtype=bool), 0.0, Q)
    cum = np.cumsum(off, axis=1)
    cum /= cum[:, -1:]
    return rates, cum


def sample_chain_path(Q, i0, horizon, rng) -> ChainPath:
    """Sample the chain on [0, horizon) from state ``i0``.

    Holding times in state i are Exp(q_i); the next state is j with
    probability q_ij / q_i.
    """
    rates, cum = jump_chain(Q)
    times: list[np.ndarray] = []
    states: list[np.ndarray] = [np.array([i0], dtype=np.int64)]
    state, t = int(i0), 0.0
    chunk = int(min(1_000_000, horizon * rates.max() * 1.1 + 64))
    finished = horizon <= 0
    while not finished:
        expo = rng.standard_exponential(chunk)
        unif = rng.random(chunk)
        out_t = np.empty(chunk)
        out_s = np.empty(chunk, dtype=np.int64)
        n, state, t, finished = chain_kernel(expo, unif, rates, cum, state, t, float(horizon), out_t, out_s)
        times.append(out_t[:n])
        states.append(out_s[:n])
    return ChainPath(
        switch_times=np.concatenate(times) if times else np.zeros(0),
        states=np.concatenate(states),
        horizon=float(horizon),
    )
