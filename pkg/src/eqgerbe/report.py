"""Verification reports and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA = 1


@dataclass
class Check:
    check_id: str
    space: str
    samples: int
    max_abs_residual: float
    tolerance: float
    worst_sample: int | None = None

    @property
    def passed(self):
        return bool(self.max_abs_residual < self.tolerance)

    def as_dict(self):
        return {
            "check_id": self.check_id,
            "space": self.space,
            "samples": self.samples,
            "max_abs_residual": self.max_abs_residual,
            "tolerance": self.tolerance,
            "worst_sample": self.worst_sample,
            "pass": self.passed,
        }


@dataclass
class Report:
    suite: str
    config: dict
    checks: list = field(default_factory=list)
    resample_count: int = 0
    wallclock_ms: int | None = None
    diagnostics: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, check_id):
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    def as_dict(self, timing=False):
        out = {
            "schema": SCHEMA,
            "suite": self.suite,
            "config": self.config,
            "checks": [c.as_dict() for c in self.checks],
            "pass": self.passed,
            "resample_count": self.resample_count,
            "wallclock_ms": self.wallclock_ms if timing else None,
        }
        if self.values:
            out["values"] = self.values
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out

    def to_json(self, timing=False):
        return json.dumps(encode(self.as_dict(timing)), indent=2) + "\n"


def encode(obj):
    """JSON-ready copy: complex numbers become {re, im}, numpy scalars become Python ones."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj
