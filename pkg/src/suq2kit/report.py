"""Machine-readable verification reports.

A report is a flat record: the suite name, an echo of the parameters, a list
of checks (each with the claim label it certifies, the measured value, the
threshold and the comparison direction), a list of trusted assumptions that
were *not* computed, optional decay rows for external plotting, and the
conjunction verdict.  The JSON layout is pinned by the schema file shipped
with the package; CSV output carries the decay rows only.
"""

from __future__ import annotations

import csv
import importlib.resources
import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["Check", "VerificationReport", "emit_report", "load_schema",
           "SCHEMA_FILENAME"]

SCHEMA_FILENAME = "report_schema.json"


@dataclass(frozen=True)
class Check:
    """One certified claim.

    mode "max": pass iff value <= threshold (residual-style).
    mode "min": pass iff value >= threshold (negative controls, fit quality).
    mode "info": recorded measurement, always passing, threshold is null.
    """

    name: str
    anchor: str
    value: float
    threshold: float | None
    mode: str = "max"

    def __post_init__(self):
        if self.mode not in ("max", "min", "info"):
            raise ValueError(f"unknown check mode {self.mode!r}")
        if (self.threshold is None) != (self.mode == "info"):
            raise ValueError("threshold is null exactly for informational checks")

    @property
    def passed(self) -> bool:
        if self.mode == "info":
            return True
        if self.mode == "max":
            return bool(self.value <= self.threshold)
        return bool(self.value >= self.threshold)

    def as_dict(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "value": float(self.value),
                "threshold": None if self.threshold is None else float(self.threshold),
                "mode": self.mode, "pass": self.passed}


@dataclass
class VerificationReport:
    suite: str
    parameters: dict
    checks: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)
    decay: list = field(default_factory=list)  # rows: (label, family, value)
    seed: int | None = None
    wall_time_ms: float = 0.0

    def add(self, check: Check):
        self.checks.append(check)

    @property
    def overall(self) -> bool:
        if not self.checks:
            raise ValueError("a suite must register at least one check")
        return bool(all(c.passed for c in self.checks))

    def as_dict(self) -> dict:
        return {
            "schema_version": "1.0",
            "suite": self.suite,
            "parameters": {k: _json_scalar(v) for k, v in sorted(self.parameters.items())},
            "seed": self.seed,
            "checks": [c.as_dict() for c in self.checks],
            "assumptions": list(self.assumptions),
            "decay": [{"label": str(l), "family": str(f), "sup_residual": float(v)}
                      for l, f, v in self.decay],
            "overall": self.overall,
            "wall_time_ms": float(self.wall_time_ms),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=False) + "\n"


def _json_scalar(v):
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


def emit_report(report: VerificationReport, out_path=None, csv_dir=None) -> list:
    """Write the JSON report and, when decay rows exist, a CSV next to it.

    Returns the list of written paths.
    """
    written = []
    if not report.checks:
        raise ValueError("refusing to emit a report with no checks")
    if out_path is not None:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(report.to_json())
        written.append(out_path)
    if csv_dir is not None and report.decay:
        csv_dir = Path(csv_dir)
        csv_dir.mkdir(parents=True, exist_ok=True)
        path = csv_dir / f"{report.suite}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["l", "family", "sup_residual"])
            for label, family, value in report.decay:
                writer.writerow([label, family, repr(float(value))])
        written.append(path)
    return written


def load_schema() -> dict:
    text = importlib.resources.files("suq2kit").joinpath(SCHEMA_FILENAME).read_text()
    return json.loads(text)
