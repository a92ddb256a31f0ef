"""TOML run configuration with a strict, versioned schema.

Layout (``schema = 1``)::

    schema = 1
    [chain]  Q = [[-1.0, 1.0], [2.0, -2.0]]
    [drift]  alpha = [-2.0, 1.0]
    [noise]  sigma = [1.0, 1.0]   b = 0.0   a = 1.0
    [levy]   kind = "zero" | "compound_poisson" | "tempered_power_law", plus family fields
    [run]    see RUN_DEFAULTS

Unknown keys anywhere are rejected with a message naming the dotted key.
"""

from __future__ import annotations

import copy
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .errors import ConfigError
from .model import RegimeModel, validate_model
from .simulate import IncrementPlan

SCHEMA_VERSION = 1

# name -> (default, help)
RUN_DEFAULTS = {
    "seed": (0, "master seed (unsigned 64-bit); --seed overrides"),
    "x0": (0.0, "initial value of X"),
    "i0": (0, "initial regime (0-based)"),
    "horizon": (10.0, "time horizon for `simulate`"),
    "n_paths": (0, "`simulate`: additionally run this many independent paths and record X_T"),
    "burn_in": (None, "stationary burn-in time; default 20 / |drift index|"),
    "n_draws": (10000, "number of retained stationary draws"),
    "gap": (1.0, "time between retained stationary draws"),
    "force": (False, "sample `stationary` even if the model is not positive recurrent"),
    "dt_max": (0.05, "output grid spacing / maximal substep"),
    "epsilon_trunc": (0.01, "small-jump cutoff in (0, 1]"),
    "small_jump_mode": ("compensate", "'compensate' (Gaussian) or 'drop'"),
    "epsilon": (0.5, "Lyapunov certificate slack epsilon"),
    "delta": (0.5, "reciprocal Lyapunov function offset delta in (0, 1)"),
    "grid_min": (1.0, "smallest |x| on the certificate grid"),
    "grid_max": (1e6, "largest |x| on the certificate grid"),
    "grid_n": (61, "number of log-spaced certificate grid radii"),
    "hill_k": (None, "Hill order-statistic count; default floor(sqrt(n))"),
    "p_list": ([1.0, 2.0, 3.0], "moment orders for the empirical moment curve"),
    "exp_lambda": (0.5, "lambda for the exponential moment probe e^{lambda |x|}"),
    "state": (0, "`oracle`: regime whose fixed-regime law is inverted"),
    "x_min": (-5.0, "`oracle`: left end of the CDF grid"),
    "x_max": (5.0, "`oracle`: right end of the CDF grid"),
    "n_x": (201, "`oracle`: number of CDF grid points"),
}

_SECTIONS = {
    "chain": ("Q",),
    "drift": ("alpha",),
    "noise": ("sigma", "b", "a"),
}
_TOP = ("schema", "chain", "drift", "noise", "levy", "run")


@dataclass
class RunConfig:
    raw: dict
    model: RegimeModel
    run: dict = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return int(self.run["seed"])

    def plan(self) -> IncrementPlan:
        try:
            return IncrementPlan(
                epsilon_trunc=float(self.run["epsilon_trunc"]),
                small_jump_mode=str(self.run["small_jump_mode"]),
                dt_max=float(self.run["dt_max"]),
            )
        except ValueError as exc:
            raise ConfigError(f"run: {exc}") from exc

    def echo(self) -> dict:
        """The effective configuration, enough to reproduce the run."""
        out = copy.deepcopy(self.raw)
        out["run"] = dict(self.run)
        return out


def parse_value(text: str):
    """Parse an override value as a TOML value, falling back to a bare string."""
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def apply_override(raw: dict, item: str):
    if "=" not in item:
        raise ConfigError(f"override {item!r} must have the form section.key=value")
    key, value = item.split("=", 1)
    parts = key.strip().split(".")
    if len(parts) != 2 or parts[0] not in _TOP or parts[0] == "schema":
        raise ConfigError(f"override key {key!r} must be section.key with section in chain/drift/noise/levy/run")
    raw.setdefault(parts[0], {})[parts[1]] = parse_value(value.strip())


def load_config(path=None, overrides=(), text=None) -> RunConfig:
    if text is None:
        if path is None:
            raise ConfigError("no configuration given (use --config)")
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from exc
    else:
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"malformed config: {exc}") from exc
    for item in overrides:
        apply_override(raw, item)
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> RunConfig:
    raw = copy.deepcopy(raw)
    for key in raw:
        if key not in _TOP:
            raise ConfigError(f"unknown key {key}")
    if raw.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"schema must be {SCHEMA_VERSION}, got {raw.get('schema')!r}")
    for section, allowed in _SECTIONS.items():
        body = raw.get(section)
        if not isinstance(body, dict):
            raise ConfigError(f"missing section [{section}]")
        for key in body:
            if key not in allowed:
                raise ConfigError(f"unknown key {section}.{key}")
    for section in ("chain", "drift"):
        key = _SECTIONS[section][0]
        if key not in raw[section]:
            raise ConfigError(f"missing key {section}.{key}")
    if "sigma" not in raw["noise"]:
        raise ConfigError("missing key noise.sigma")
    levy = raw.get("levy", {"kind": "zero"})
    if not isinstance(levy, dict):
        raise ConfigError("[levy] must be a table")
    run_raw = raw.get("run", {})
    for key in run_raw:
        if key not in RUN_DEFAULTS:
            raise ConfigError(f"unknown key run.{key}")
    run = {k: run_raw.get(k, default) for k, (default, _) in RUN_DEFAULTS.items()}
    noise = raw["noise"]
    try:
        model = validate_model(
            raw["chain"]["Q"],
            raw["drift"]["alpha"],
            noise["sigma"],
            b=float(noise.get("b", 0.0)),
            a=float(noise.get("a", 1.0)),
            measure=levy,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid model entry: {exc}") from exc
    return RunConfig(raw=raw, model=model, run=run)


def run_help() -> str:
    lines = ["[run] keys (default: meaning):"]
    for key, (default, text) in RUN_DEFAULTS.items():
        lines.append(f"  {key} = {default!r}: {text}")
    return "\n".join(lines)
