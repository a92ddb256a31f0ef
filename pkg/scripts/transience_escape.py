"""Escape fraction of the transient switching model alpha = (2, -1) (positive
drift index) versus horizon: share of paths from x0 = 1 with |X_T| > 10."""

import argparse

import numpy as np

from rslou.model import validate_model
from rslou.simulate import IncrementPlan, simulate_batch


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=9)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    model = validate_model([[-1.0, 1.0], [2.0, -2.0]], [2.0, -1.0], [1.0, 1.0])
    print("horizon  escaped  overflowed")
    for T in (1, 2, 5, 10, 20, 50):
        res = simulate_batch(model, 1.0, 0, float(T), IncrementPlan(), args.seed, args.paths, args.workers)
        frac = np.mean((np.abs(res.terminal) > 10) | res.overflowed)
        print(f"{T:7d}  {frac:7.3f}  {int(res.overflowed.sum()):10d}")


if __name__ == "__main__":
    main()
