"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

``pytest tests/test_acceptance.py -v`` prints the lines past output
capture; ``python3 tests/test_acceptance.py`` runs the same checks as a script.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy.special import erf

from rslou.analyze import classify
from rslou.analyze.lyapunov import (
    generator_apply,
    log_diffusion_closed_form,
    reciprocal_diffusion_ratio,
    verify_log_drift,
    verify_reciprocal_drift,
)
from rslou.analyze.tails import empirical_moment_curve, exp_moment_probe, hill_sweep, hill_tail_index, ks_statistic
from rslou.chain import stationary_distribution
from rslou.model import validate_model
from rslou.oracle import invert_to_cdf, stationary_cf
from rslou.rng import master_stream
from rslou.simulate import IncrementPlan, sample_stationary, simulate_batch
from rslou.spectral import kappa, kappa_upper_bound

try:
    from .helpers import Q2, random_generator
except ImportError:  # run as a script
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from tests.helpers import Q2, random_generator

PARETO_PLUS_12 = {"kind": "compound_poisson", "rate": 1.0, "jump": "pareto", "beta": 1.2, "side": "+", "scale": 1.0}
TPL_3 = {
    "kind": "tempered_power_law",
    "c_plus": 1.0, "c_minus": 1.0,
    "beta_plus": 0.5, "beta_minus": 0.5,
    "theta_plus": 3.0, "theta_minus": 3.0,
}
# seeds are pinned; see scripts/criterion5_seed_sweep.py for the pass rate over seeds
SEED_STATIONARY = 0


def report(number, ok, elapsed, limit, detail, capsys=None):
    ok = bool(ok) and elapsed < limit
    line = f"CRITERION {number:>2}: {'PASS' if ok else 'FAIL'}  ({elapsed:.2f}s / limit {limit:g}s)  {detail}"
    if capsys is None:
        print(line, flush=True)
    else:
        with capsys.disabled():
            print("\n" + line, flush=True)
    return ok


def check_1():
    rng = np.random.default_rng(1001)
    worst = 0.0
    for _ in range(100):
        Q = random_generator(rng, int(rng.integers(2, 9)))
        mu = stationary_distribution(Q).mu
        worst = max(worst, float(np.max(np.abs(mu @ Q))))
    mu2 = stationary_distribution(Q2).mu
    exact = max(abs(mu2[0] - 2 / 3), abs(mu2[1] - 1 / 3))
    return worst <= 1e-12 and exact <= 1e-15, f"max |muQ| = {worst:.2e}, 2-state error = {exact:.1e}", 1.0


def check_2():
    alpha = np.array([-2.0, 1.0])
    k = kappa(Q2, alpha)
    inf_ok = kappa(Q2, [-1.0, -1.0]) == math.inf and kappa(Q2, [0.0, 0.0]) == math.inf
    rng = np.random.default_rng(2002)
    bound_ok, tested = True, 0
    while tested < 50:
        Q = random_generator(rng, 3)
        a = rng.uniform(-3, 3, 3)
        if not (a.max() > 0 and a.min() < 0 and stationary_distribution(Q).mu @ a < 0):
            continue
        tested += 1
        bound_ok &= kappa(Q, a) < kappa_upper_bound(Q, a)
    ok = abs(k - 1.5) <= 1e-6 and inf_ok and bound_ok
    return ok, f"kappa = {k:.12f}, equal alpha -> inf: {inf_ok}, bound on {tested} models: {bound_ok}", 1.0


def check_3():
    from rslou.model import LevyTriplet

    trip = LevyTriplet(0.0, 1.0)
    cf = lambda z: stationary_cf(z, -1.0, 1.0, trip)  # noqa: E731
    x = np.linspace(-4, 4, 161)
    F = invert_to_cdf(cf, x)
    err = float(np.max(np.abs(F - 0.5 * (1 + erf(x)))))  # N(0, 1/2) cdf
    cf0 = abs(stationary_cf(0.0, -1.0, 1.0, trip) - 1)
    return err <= 1e-4 and cf0 <= 1e-12, f"sup |F - Phi| = {err:.2e}, |cf(0) - 1| = {cf0:.1e}", 5.0


def check_4():
    nu = {"kind": "compound_poisson", "rate": 1.0, "jump": "gaussian", "mean": 0.0, "sd": 1.0}
    model = validate_model(Q2, [-1.0, -1.0], [1.0, 1.0], measure=nu)
    x = np.linspace(-8, 8, 1601)
    F = invert_to_cdf(lambda z: stationary_cf(z, -1.0, 1.0, model.triplet), x)
    sample = sample_stationary(model, 20.0, 100_000, 1.0, rng=master_stream(4))
    ks = ks_statistic(sample.x, lambda v: np.interp(v, x, F, left=0.0, right=1.0))
    return ks <= 0.02, f"KS = {ks:.4f} over {len(sample)} draws", 120.0


def stationary_draws(model, n, seed):
    return sample_stationary(model, 20.0 / abs(model.drift_index), n, 1.0, rng=master_stream(seed)).x


def check_5():
    model = validate_model(Q2, [-2.0, 1.0], [1.0, 1.0])
    x = stationary_draws(model, 1_000_000, SEED_STATIONARY)
    sweep = hill_sweep(x)
    in_band = sum(1.2 <= v <= 1.8 for _, v in sweep)
    curve = empirical_moment_curve(x, [1, 3], prefixes=(10**4, 10**6))
    (n1, m1a), (_, m1b) = curve[1.0]
    (_, m3a), (_, m3b) = curve[3.0]
    growth3 = m3b / m3a
    change1 = abs(m1b / m1a - 1)
    ok = 2 * in_band >= len(sweep) and growth3 >= 5 and change1 <= 0.10
    detail = (
        f"Hill in [1.2, 1.8] for {in_band}/{len(sweep)} k; p=3 growth 1e4->1e6 = {growth3:.1f}x; "
        f"p=1 change = {100 * change1:.1f}% (seed {SEED_STATIONARY})"
    )
    return ok, detail, 600.0


def check_6():
    model = validate_model(Q2, [-2.0, -1.0], [1.0, 1.0], measure=PARETO_PLUS_12)
    verdict = classify(model).tail
    x = stationary_draws(model, 1_000_000, SEED_STATIONARY)
    probe = {n: lm for n, lm, _ in exp_moment_probe(x, 0.5, prefixes=(10**4, 10**6))}
    log_growth = probe[10**6] - probe[10**4]
    hill = hill_tail_index(np.abs(x), math.isqrt(x.size))
    ok = verdict.cause == "JumpDriven" and log_growth >= math.log(10) and 0.9 <= hill <= 1.5
    detail = f"{verdict.label()}; log(probe growth) = {log_growth:.1f} (need >= {math.log(10):.2f}); Hill(k=1000) = {hill:.3f}"
    return ok, detail, 600.0


def check_7():
    model = validate_model(Q2, [-2.0, -1.0], [1.0, 1.0], measure=TPL_3)
    verdict = classify(model).tail
    x = stationary_draws(model, 1_000_000, SEED_STATIONARY)
    probe = {n: m for n, _, m in exp_moment_probe(x, 0.5, prefixes=(10**5, 10**6))}
    change = abs(probe[10**6] / probe[10**5] - 1)
    ok = verdict.status == "Light" and change <= 0.10
    return ok, f"{verdict.label()}; e^(0.5|x|) mean change 1e5->1e6 = {100 * change:.3f}%", 600.0


def check_8():
    model = validate_model(Q2, [-2.0, 1.0], [1.0, 1.0])
    log_cert = verify_log_drift(model, 0.5)
    transient = validate_model(Q2, [2.0, -1.0], [1.0, 1.0])
    rec_cert = verify_reciprocal_drift(transient, 0.5, 0.5)
    h = (lambda y: np.log1p(y * y), lambda y: 2 * y / (1 + y * y), lambda y: 2 * (1 - y * y) / (1 + y * y) ** 2)
    d = 0.5
    V = (lambda y: 1 / (d + y * y), lambda y: -2 * y / (d + y * y) ** 2, lambda y: (6 * y * y - 2 * d) / (d + y * y) ** 3)
    worst = 0.0
    for m in (model, transient):
        for i in range(2):
            for x in np.concatenate([-np.logspace(-2, 6, 41), np.logspace(-2, 6, 41)]):
                al, s = m.alpha[i], m.sigma[i]
                worst = max(worst, abs(generator_apply(*h, x, i, m) - log_diffusion_closed_form(x, al, s, 0.0, 1.0)))
                ratio = generator_apply(*V, x, i, m) * (d + x * x)
                worst = max(worst, abs(ratio - reciprocal_diffusion_ratio(x, al, s, 0.0, 1.0, d)))
    ok = (
        log_cert.found
        and all(mg >= 0 for mg in log_cert.per_state_margins)
        and rec_cert.found
        and worst <= 1e-8
    )
    detail = (
        f"log r0 = {log_cert.r0}, margins = {tuple(round(v, 4) for v in log_cert.per_state_margins)}; "
        f"reciprocal r0 = {rec_cert.r0}; closed-form max error = {worst:.1e}"
    )
    return ok, detail, 60.0


def check_9():
    model = validate_model(Q2, [2.0, -1.0], [1.0, 1.0])
    res = simulate_batch(model, 1.0, 0, 50.0, IncrementPlan(), seed=9, n_paths=1000)
    escaped = (np.abs(res.terminal) > 10) | res.overflowed
    frac = float(escaped.mean())
    return frac >= 0.9, f"fraction with |X_T| > 10: {frac:.3f} ({int(res.overflowed.sum())} overflowed)", 120.0


PROPERTY_TESTS = [
    "tests/test_oracle.py::test_cf_hermitian_and_bounded",
    "tests/test_measures.py::test_exponent_hermitian_and_nonnegative",
    "tests/test_lyapunov.py::test_generator_linearity",
    "tests/test_lyapunov.py::test_finite_difference_derivatives",
    "tests/test_lyapunov.py::test_certificate_monotone_in_epsilon",
    "tests/test_spectral.py::test_shift_identity",
    "tests/test_spectral.py::test_kappa_bracketing_and_bound",
    "tests/test_simulate.py::test_determinism",
    "tests/test_simulate.py::test_refinement_consistency",
    "tests/test_simulate.py::test_noise_free_path_is_piecewise_exponential",
    "tests/test_simulate.py::test_jump_conservation_property",
    "tests/test_verdicts.py::test_verdict_soundness_and_exclusion",
    "tests/test_model.py::test_integrability_invariants",
    "tests/test_chain.py::test_stationary_residual_property",
    "tests/test_chain.py::test_path_invariants_and_determinism",
    "tests/test_cli.py::test_byte_identical_outputs",
    "tests/test_cli.py::test_stationary_outputs_and_round_trip",
]


def check_10():
    from hypothesis import settings

    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *PROPERTY_TESTS],
        cwd=root, capture_output=True, text=True,
    )
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()[-200:]
    fixed = settings.default.derandomize and settings.default.max_examples >= 20
    return proc.returncode == 0 and fixed, f"{len(PROPERTY_TESTS)} property suites: {tail}; derandomized: {fixed}", 600.0


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10]


def run_check(number, capsys=None):
    start = time.perf_counter()
    ok, detail, limit = CHECKS[number - 1]()
    return report(number, ok, time.perf_counter() - start, limit, detail, capsys)


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number, capsys):
    assert run_check(number, capsys)


if __name__ == "__main__":
    if "tests" not in sys.modules:
        os.chdir(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from hypothesis import settings

    settings.register_profile("fixed", derandomize=True, max_examples=60, deadline=None)
    settings.load_profile("fixed")
    results = [run_check(k) for k in range(1, 11)]
    print(f"{sum(results)}/10 criteria passed")
    sys.exit(0 if all(results) else 1)
