"""Golden regression suite.

A small set of numeric anchors with known-correct answers, stored as a
fixture so the expected values cannot drift with the code.  Each case
records its provenance, the inputs, the expected outputs, and the
comparison tolerance.  ``run_golden_suite`` evaluates every case and
returns structured results; it raises nothing, so callers can report all
failures at once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .effects import counterfactual_params
from .equivalence import default_delta
from .probit import CellParams
from .simulate import pt_gap

__all__ = ["GoldenCase", "GoldenResult", "load_golden_cases",
           "run_golden_suite"]


@dataclass(frozen=True)
class GoldenCase:
    name: str
    kind: str
    source: str
    inputs: dict
    expected: dict
    tolerance: float


@dataclass(frozen=True)
class GoldenResult:
    case: GoldenCase
    actual: dict
    passed: bool
    max_error: float


def load_golden_cases() -> list[GoldenCase]:
    text = (resources.files("ordinal_did") / "fixtures" /
            "golden.json").read_text()
    raw = json.loads(text)
    return [GoldenCase(**case) for case in raw["cases"]]


def _evaluate(case: GoldenCase) -> dict:
    if case.kind == "counterfactual":
        cells = {k: CellParams(*v) for k, v in case.inputs.items()}
        cf = counterfactual_params(cells["theta00"], cells["theta01"],
                                   cells["theta10"])
        return {"mu11": cf.mu11, "sigma11": cf.sigma11}
    if case.kind == "default_delta":
        return {"delta": default_delta(case.inputs["n1"],
                                       case.inputs["n0"])}
    if case.kind == "pt_gap":
        out = {}
        for key in case.expected:
            j = int(key.rsplit("_", 1)[1])
            out[key] = pt_gap(case.inputs["pi_treated_t0"],
                              case.inputs["pi_treated_t1"],
                              case.inputs["pi_control_t0"],
                              case.inputs["pi_control_t1"], j)
        return out
    raise ValueError(f"unknown golden case kind {case.kind!r}")


def run_golden_suite() -> list[GoldenResult]:
    results = []
    for case in load_golden_cases():
        actual = _evaluate(case)
        errors = [abs(actual[k] - case.expected[k]) for k in case.expected]
        max_error = max(errors)
        results.append(GoldenResult(case=case, actual=actual,
                                    passed=max_error <= case.tolerance,
                                    max_error=max_error))
    return results
