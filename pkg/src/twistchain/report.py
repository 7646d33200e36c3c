"""Verification reports.

Every check is exact, so a report passes exactly when the residual
(difference operator, Schouten bracket, ...) has empty support.
"""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from .exactring import Jet, format_rational

SCHEMA = "1"

CAVEAT = ("Hopf-level identities are checked exactly in finite-dimensional "
          "representations; this is necessary, not sufficient, for the identity "
          "in U(g)^{(x)k}.")


def _fmt_param(v):
    if isinstance(v, Jet):
        return v.to_json()
    if isinstance(v, (list, tuple)):
        return [_fmt_param(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _fmt_param(x) for k, x in v.items()}
    if isinstance(v, (str, bool)) or v is None:
        return v
    if isinstance(v, int):
        return v
    try:
        return format_rational(v)
    except TypeError:
        return str(v)


@dataclass
class VerificationReport:
    check: str
    passed: bool
    residual_support: int
    params: dict = field(default_factory=dict)
    rep: str = ""
    seed: int | None = None
    elapsed: float = 0.0
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_json(self, with_timing=False):
        out = {
            "check": self.check,
            "pass": self.passed,
            "residual_support": self.residual_support,
            "params": _fmt_param(self.params),
            "rep": self.rep,
            "seed": self.seed,
        }
        if self.detail:
            out["detail"] = _fmt_param(self.detail)
        if with_timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.check} (residual support {self.residual_support}, rep={self.rep or '-'})"


@contextmanager
def timed():
    box = {"t0": time.perf_counter()}
    yield box
    box["elapsed"] = time.perf_counter() - box["t0"]


def dumps(reports, header=None):
    """Deterministic JSON text for a list of reports."""
    doc = {"schema": SCHEMA, "caveat": CAVEAT}
    if header:
        doc.update(header)
    doc["all_pass"] = all(r.passed for r in reports)
    doc["reports"] = [r.to_json() for r in sorted(reports, key=lambda r: r.check)]
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
