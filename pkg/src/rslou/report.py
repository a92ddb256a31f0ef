"""JSON run reports."""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .errors import IoFailure


def jsonable(obj):
    """Plain JSON-compatible copy; non-finite floats become "inf"/"-inf"/"nan"."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


@dataclass
class RunReport:
    command: str
    tool_version: str
    config_echo: dict
    seed: int | None = None
    model: dict | None = None
    verdict: dict | None = None
    spectral: dict | None = None
    tail_stats: dict | None = None
    drift_certificates: list | None = None
    oracle: dict | None = None
    extra: dict | None = None
    sample_files: dict = field(default_factory=dict)
    wall_clock: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            setattr(self, f.name, jsonable(getattr(self, f.name)))

    def to_dict(self) -> dict:
        # fields may have been assigned after construction
        return jsonable(asdict(self))

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown report keys {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def emit_report(report: RunReport, out_dir) -> dict:
    """Write ``report.json`` into ``out_dir``; returns all artifact paths."""
    path = os.path.join(out_dir, "report.json")
    try:
        os.makedirs(out_dir, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_json())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return {"report": path, **report.sample_files}


def load_report(path) -> RunReport:
    with open(path, encoding="utf-8") as fh:
        return RunReport.from_dict(json.load(fh))
