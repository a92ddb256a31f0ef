"""Compare the empirical tails of the three stationary regimes: switch-driven
heavy (zero measure, alpha = (-2, 1)), jump-driven heavy (Pareto 1.2 jumps)
and light (tempered power law, theta = 3), both with alpha = (-2, -1).

Prints verdicts, Hill k-sweeps, moment curves and exponential-moment probes.
"""

import argparse

from rslou.analyze import classify
from rslou.analyze.tails import tail_stats
from rslou.model import validate_model
from rslou.rng import master_stream
from rslou.simulate import sample_stationary

Q = [[-1.0, 1.0], [2.0, -2.0]]
MODELS = {
    "switch-driven": dict(alpha=[-2.0, 1.0], measure=None),
    "jump-driven": dict(
        alpha=[-2.0, -1.0],
        measure={"kind": "compound_poisson", "rate": 1.0, "jump": "pareto", "beta": 1.2, "side": "+", "scale": 1.0},
    ),
    "light": dict(
        alpha=[-2.0, -1.0],
        measure={"kind": "tempered_power_law", "c_plus": 1.0, "c_minus": 1.0, "beta_plus": 0.5,
                 "beta_minus": 0.5, "theta_plus": 3.0, "theta_minus": 3.0},
    ),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for name, spec in MODELS.items():
        model = validate_model(Q, spec["alpha"], [1.0, 1.0], measure=spec["measure"])
        rep = classify(model)
        x = sample_stationary(model, 20.0 / abs(model.drift_index), args.n, 1.0, rng=master_stream(args.seed)).x
        ts = tail_stats(x)
        print(f"== {name}: {rep.recurrence.status}, {rep.tail.label()}, kappa = {rep.spectral.kappa}")
        print("   hill  " + "  ".join(f"k={k}:{v:.2f}" for k, v in ts.hill_estimates))
        for p, pts in ts.moment_curve.items():
            print(f"   E|x|^{p:g} " + "  ".join(f"n={n}:{m:.4g}" for n, m in pts))
        print("   log E e^(0.5|x|) " + "  ".join(f"n={n}:{lm:.4g}" for n, lm, _ in ts.exp_moment_probe))


if __name__ == "__main__":
    main()
