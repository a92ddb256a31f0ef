"""Compiled inner loops. Everything random is drawn by the callers; these
kernels only do sequential arithmetic, so results do not depend on whether
numba is available."""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def chain_kernel(expo, unif, rates, cum, state, t, horizon, out_t, out_s):
    """Advance a jump chain using pre-drawn Exp(1) and U(0,1) variates.

    Returns ``(n_written, state, t, finished)``.
    """
    n = 0
    nstates = rates.shape[0]
    for k in range(expo.shape[0]):
        t = t + expo[k] / rates[state]
        if t >= horizon:
            return n, state, t, True
        j = 0
        while j < nstates - 1 and cum[state, j] <= unif[k]:
            j += 1
        out_t[n] = t
        out_s[n] = j
        n += 1
        state = j
    return n, state, t, False


@njit(cache=True)
def affine_scan(x0, mult, add, jumps, limit):
    """x_{k+1} = mult[k] * x_k + add[k], then x_{k+1} += jumps[k].

    Returns the trajectory (length n+1) and the index of the first entry whose
    magnitude exceeds ``limit`` (or -1).
    """
    n = mult.shape[0]
    out = np.empty(n + 1)
    out[0] = x0
    x = x0
    bad = -1
    for k in range(n):
        x = mult[k] * x + add[k] + jumps[k]
        out[k + 1] = x
        if bad < 0 and not (abs(x) <= limit):
            bad = k + 1
            for m in range(k + 2, n + 1):
                out[m] = np.nan
            break
    return out, bad
