"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 precondition error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .analyze import lyapunov, tails
from .analyze.verdicts import classify
from .config import RunConfig, load_config, run_help
from .errors import ConfigError, IoFailure, PreconditionError, RslouError
from .oracle import invert_to_cdf, stationary_cf, write_cdf_csv
from .report import RunReport, emit_report
from .rng import check_seed, master_stream
from .simulate import sample_stationary, simulate_batch, simulate_path
from .spectral import spectral_report

COMMANDS = ("validate", "classify", "kappa", "simulate", "stationary", "oracle", "oracle-compare", "lyapunov")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="TOML model/run configuration (schema = 1)")
    common.add_argument("--seed", type=int, default=None, help="master seed, unsigned 64-bit (default: run.seed, 0)")
    common.add_argument("--out", default=".", help="output directory (default: current directory)")
    common.add_argument("--workers", type=int, default=None, help="worker processes (default: available CPUs)")
    common.add_argument(
        "--override", action="append", default=[], metavar="KEY=VALUE",
        help="set section.key to a TOML value, e.g. run.horizon=50 (repeatable)",
    )
    parser = argparse.ArgumentParser(
        prog="rslou",
        description="Regime-switching Levy-driven OU toolkit.",
        epilog=run_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check the model only",
        "classify": "recurrence/tail verdict and kappa (report.json)",
        "kappa": "Q_p spectrum and the moment index kappa",
        "simulate": "one path on [0, run.horizon] (path.csv)",
        "stationary": "approximately stationary draws + tail statistics (stationary.csv)",
        "oracle": "stationary CDF of the fixed regime run.state (cdf.csv)",
        "oracle-compare": "KS distance between stationary draws and the inverted CDF",
        "lyapunov": "numerical drift certificates",
    }
    for name in COMMANDS:
        sub.add_parser(
            name, parents=[common], help=helps[name], epilog=run_help(),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
    return parser


# -- commands ----------------------------------------------------------------------


def _burn_in(cfg: RunConfig):
    if cfg.run["burn_in"] is not None:
        return float(cfg.run["burn_in"])
    d = abs(cfg.model.drift_index)
    return 20.0 / d if d > 0 else 20.0


def _write_csv(fn, path):
    try:
        fn(path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _cmd_validate(cfg, args, rep):
    rep.extra = {"valid": True, "N": cfg.model.N, "mu": cfg.model.mu.tolist()}


def _cmd_classify(cfg, args, rep):
    verdict = classify(cfg.model)
    rep.verdict = verdict.to_dict()
    rep.spectral = verdict.spectral.to_dict()
    if verdict.recurrence.status != "PositiveRecurrent":
        rep.extra = {"precondition": "tail classification needs a positive recurrent model"}
        return 2
    return 0


def _cmd_kappa(cfg, args, rep):
    rep.spectral = spectral_report(cfg.model.Q, cfg.model.alpha).to_dict()


def _cmd_simulate(cfg, args, rep):
    run = cfg.run
    plan = cfg.plan()
    path = simulate_path(cfg.model, float(run["x0"]), int(run["i0"]), float(run["horizon"]), plan, master_stream(cfg.seed))
    out = os.path.join(args.out, "path.csv")
    _write_csv(path.to_csv, out)
    rep.sample_files["path"] = "path.csv"
    rep.extra = {"n_points": int(path.times.size), "n_jumps": int(path.jumps.shape[0]), "x_T": float(path.x[-1])}
    n_paths = int(run["n_paths"])
    if n_paths > 0:
        batch = simulate_batch(
            cfg.model, float(run["x0"]), int(run["i0"]), float(run["horizon"]), plan, cfg.seed, n_paths, args.workers
        )
        data = np.column_stack([np.arange(n_paths), batch.terminal, batch.overflowed.astype(int)])
        tpath = os.path.join(args.out, "terminal.csv")

        def write(p):
            with open(p, "w", encoding="utf-8", newline="\n") as fh:
                np.savetxt(fh, data, delimiter=",", header="path,x_T,overflowed", comments="", fmt=["%d", "%.17g", "%d"])

        _write_csv(write, tpath)
        rep.sample_files["terminal"] = "terminal.csv"
        finite = batch.terminal[~batch.overflowed]
        rep.extra.update(
            n_paths=n_paths,
            overflowed=int(batch.overflowed.sum()),
            frac_abs_gt_10=float(np.mean((np.abs(batch.terminal) > 10) | batch.overflowed)),
            mean_x_T=float(finite.mean()) if finite.size else None,
        )


def _stationary(cfg, force=None):
    run = cfg.run
    return sample_stationary(
        cfg.model,
        _burn_in(cfg),
        int(run["n_draws"]),
        float(run["gap"]),
        cfg.plan(),
        master_stream(cfg.seed),
        override=bool(run["force"]) if force is None else force,
        seed_info={"seed": cfg.seed},
    )


def _tail_stats(cfg, x, cdf=None):
    run = cfg.run
    stats = tails.tail_stats(x, p_list=[float(p) for p in run["p_list"]], lam=float(run["exp_lambda"]), cdf=cdf)
    if run["hill_k"] is not None and x.size > int(run["hill_k"]):
        stats.hill_default = (int(run["hill_k"]), tails.hill_tail_index(np.abs(x), int(run["hill_k"])))
    return stats


def _cmd_stationary(cfg, args, rep):
    sample = _stationary(cfg)
    out = os.path.join(args.out, "stationary.csv")
    _write_csv(sample.to_csv, out)
    rep.sample_files["stationary"] = "stationary.csv"
    rep.tail_stats = _tail_stats(cfg, sample.x).to_dict()
    freq = np.bincount(sample.state, minlength=cfg.model.N) / max(len(sample), 1)
    rep.extra = {
        "burn_in": sample.burn_in,
        "gap": sample.gap,
        "n_draws": len(sample),
        "state_frequencies": freq.tolist(),
        "mu": cfg.model.mu.tolist(),
    }


def _fixed_regime(cfg, state):
    m = cfg.model
    if not 0 <= state < m.N:
        raise ConfigError(f"run.state = {state} out of range [0, {m.N - 1}]")
    return float(m.alpha[state]), float(m.sigma[state])


def _oracle_table(cfg, alpha, sigma):
    run = cfg.run
    x = np.linspace(float(run["x_min"]), float(run["x_max"]), int(run["n_x"]))
    triplet = cfg.model.triplet
    F = invert_to_cdf(lambda z: stationary_cf(z, alpha, sigma, triplet), x)
    return x, F


def _cmd_oracle(cfg, args, rep):
    alpha, sigma = _fixed_regime(cfg, int(cfg.run["state"]))
    x, F = _oracle_table(cfg, alpha, sigma)
    _write_csv(lambda p: write_cdf_csv(p, x, F), os.path.join(args.out, "cdf.csv"))
    rep.sample_files["cdf"] = "cdf.csv"
    rep.oracle = {"state": int(cfg.run["state"]), "alpha": alpha, "sigma": sigma, "n_x": int(x.size)}


def _cmd_oracle_compare(cfg, args, rep):
    m = cfg.model
    if not (np.all(m.alpha == m.alpha[0]) and np.all(m.sigma == m.sigma[0])):
        raise PreconditionError("oracle-compare needs an equal-regime model (all drift.alpha and noise.sigma equal)")
    alpha, sigma = float(m.alpha[0]), float(m.sigma[0])
    x, F = _oracle_table(cfg, alpha, sigma)
    sample = _stationary(cfg)
    cdf = lambda v: np.interp(v, x, F, left=0.0, right=1.0)  # noqa: E731
    _write_csv(lambda p: write_cdf_csv(p, x, F), os.path.join(args.out, "cdf.csv"))
    _write_csv(sample.to_csv, os.path.join(args.out, "stationary.csv"))
    rep.sample_files.update(cdf="cdf.csv", stationary="stationary.csv")
    stats = _tail_stats(cfg, sample.x, cdf=cdf)
    rep.tail_stats = stats.to_dict()
    rep.oracle = {"alpha": alpha, "sigma": sigma, "ks_distance": stats.ks_distance, "n_draws": len(sample)}


def _cmd_lyapunov(cfg, args, rep):
    run = cfg.run
    grid = lyapunov.default_grid(float(run["grid_min"]), float(run["grid_max"]), int(run["grid_n"]))
    d = cfg.model.drift_index
    certs = []
    if d < 0:
        certs.append(lyapunov.verify_log_drift(cfg.model, float(run["epsilon"]), grid))
    elif d > 0:
        certs.append(lyapunov.verify_reciprocal_drift(cfg.model, float(run["delta"]), float(run["epsilon"]), grid))
    else:
        raise PreconditionError("drift index is zero: no drift certificate applies")
    rep.drift_certificates = [c.to_dict() for c in certs]


HANDLERS = {
    "validate": _cmd_validate,
    "classify": _cmd_classify,
    "kappa": _cmd_kappa,
    "simulate": _cmd_simulate,
    "stationary": _cmd_stationary,
    "oracle": _cmd_oracle,
    "oracle-compare": _cmd_oracle_compare,
    "lyapunov": _cmd_lyapunov,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = load_config(args.config, args.override)
        if args.seed is not None:
            cfg.run["seed"] = args.seed
        try:
            cfg.run["seed"] = check_seed(cfg.run["seed"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"run.seed: {exc}") from exc
        if args.workers is not None and args.workers < 1:
            raise ConfigError(f"--workers must be >= 1, got {args.workers}")
        os.makedirs(args.out, exist_ok=True)
        rep = RunReport(
            command=args.command,
            tool_version=__version__,
            config_echo=cfg.echo(),
            seed=cfg.seed,
            model=cfg.model.to_dict(),
        )
        code = HANDLERS[args.command](cfg, args, rep) or 0
        rep.wall_clock = round(time.perf_counter() - start, 6)
        emit_report(rep, args.out)
        print(json.dumps(_summary(rep), sort_keys=True))
        return code
    except RslouError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error (IoFailure): {exc}", file=sys.stderr)
        return IoFailure.exit_code


def _summary(rep: RunReport) -> dict:
    out = {"command": rep.command}
    for key in ("verdict", "spectral", "oracle", "extra"):
        if getattr(rep, key) is not None:
            out[key] = getattr(rep, key)
    if rep.drift_certificates is not None:
        out["drift_certificates"] = rep.drift_certificates
    out["files"] = rep.sample_files
    return out


def main():  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
