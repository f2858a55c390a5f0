"""Verification records and the versioned JSON report format.

A CheckReport is one verification event: computed value, reference value,
errors, tolerance, and a pass flag that is false whenever the underlying
quadrature failed to converge (non-convergence is data, not an exception).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

SCHEMA_VERSION = "1.0"


@dataclass
class CheckReport:
    check_id: str
    paper_ref: str
    computed: float
    reference: float | None
    abs_err: float
    rel_err: float
    tol: float
    tol_mode: str  # "abs" | "rel" | "either"
    passed: bool
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "paper_ref": self.paper_ref,
            "computed": self.computed,
            "reference": self.reference,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "tol": self.tol,
            "tol_mode": self.tol_mode,
            "pass": self.passed,
            "metadata": self.metadata,
        }


def make_check(check_id: str, ref_text: str, computed: float,
               reference: float | None, tol: float, tol_mode: str = "abs",
               converged: bool = True, metadata: dict | None = None) -> CheckReport:
    """Assemble a CheckReport; the pass flag follows the declared tolerance
    mode and is forced false by a non-converged quadrature."""
    md = dict(metadata or {})
    if not math.isfinite(computed):
        md.setdefault("computed_nonfinite", repr(computed))
        computed = 0.0
        converged = False
    if reference is None:
        abs_err = 0.0
        rel_err = 0.0
        passed = bool(converged)
    else:
        abs_err = abs(computed - reference)
        # against a zero reference the relative error degenerates; report the
        # absolute error there so the field stays meaningful and finite
        rel_err = abs_err / abs(reference) if reference != 0.0 else abs_err
        if tol_mode == "abs":
            passed = abs_err <= tol
        elif tol_mode == "rel":
            passed = rel_err <= tol
        elif tol_mode == "either":
            passed = (abs_err <= tol) or (rel_err <= tol)
        else:
            raise ValueError(f"unknown tol_mode {tol_mode!r}")
        passed = passed and bool(converged)
    if not converged:
        md.setdefault("flag", "non-converged or failed structural predicate")
    return CheckReport(check_id, ref_text, float(computed),
                       None if reference is None else float(reference),
                       float(abs_err), float(rel_err), float(tol), tol_mode,
                       bool(passed), md)


def assemble_report(suite: str, params: dict, checks: list[CheckReport]) -> dict:
    """Deterministic report structure, checks ordered by check_id."""
    ordered = sorted(checks, key=lambda c: c.check_id)
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "params": params,
        "checks": [c.to_dict() for c in ordered],
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_to_csv(report: dict) -> str:
    import csv as _csv
    import io

    buf = io.StringIO()
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow(["check_id", "computed", "reference", "abs_err", "rel_err",
                "tol", "tol_mode", "pass"])
    for c in report["checks"]:
        w.writerow([c["check_id"], "%.17g" % c["computed"],
                    "" if c["reference"] is None else "%.17g" % c["reference"],
                    "%.17g" % c["abs_err"], "%.17g" % c["rel_err"],
                    "%.17g" % c["tol"], c["tol_mode"], str(c["pass"]).lower()])
    return buf.getvalue()


# JSON Schema (draft 2020-12) for report validation
REPORT_JSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "suite", "params", "checks"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "suite": {"type": "string"},
        "params": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["check_id", "paper_ref", "computed", "reference",
                             "abs_err", "rel_err", "tol", "tol_mode", "pass",
                             "metadata"],
                "properties": {
                    "check_id": {"type": "string"},
                    "paper_ref": {"type": "string"},
                    "computed": {"type": "number"},
                    "reference": {"type": ["number", "null"]},
                    "abs_err": {"type": "number"},
                    "rel_err": {"type": "number"},
                    "tol": {"type": "number"},
                    "tol_mode": {"enum": ["abs", "rel", "either"]},
                    "pass": {"type": "boolean"},
                    "metadata": {"type": "object"},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}
