"""Verification reports and their JSON form (numbers as decimal strings)."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .arith import INFINITY

PASS = "PASS"
FAIL = "FAIL"


def to_jsonable(value: Any) -> Any:
    """Recursively turn numbers into decimal strings ("num/den" for fractions)."""
    if isinstance(value, bool) or value is None:
        return value
    if value is INFINITY:
        return "INFINITY"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


@dataclass
class Report:
    claim: str
    params: dict
    order: Optional[int] = None
    status: str = PASS
    first_bad_index: Optional[int] = None
    witness: Any = None
    elapsed_ms: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def fail(self, index=None, witness=None, **details):
        self.status = FAIL
        if self.first_bad_index is None:
            self.first_bad_index = index
            self.witness = witness
        self.details.update(details)
        return self

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "claim": self.claim,
            "params": to_jsonable(self.params),
            "order": to_jsonable(self.order),
            "status": self.status,
        }
        if self.first_bad_index is not None:
            d["first_bad_index"] = to_jsonable(self.first_bad_index)
        if self.witness is not None:
            d["witness"] = to_jsonable(self.witness)
        if self.details:
            d["details"] = to_jsonable(self.details)
        if timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)


@contextmanager
def timed(report: Report):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.elapsed_ms = (time.perf_counter() - t0) * 1000.0
