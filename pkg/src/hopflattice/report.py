"""Pass/fail check collection shared by the verification suites."""

from __future__ import annotations

import time
from typing import Any

from .linalg import format_scalar


def jsonable(x: Any):
    if isinstance(x, dict):
        return {str(jsonable(k)) if not isinstance(k, (str, int)) else k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    try:
        return format_scalar(x)
    except (TypeError, ValueError):
        return str(x)


class Report:
    """Ordered list of named checks plus recorded dimensions."""

    def __init__(self, suite: str):
        self.suite = suite
        self.checks: list[dict] = []
        self.dims: dict = {}
        self._t0 = time.perf_counter()

    def check(self, name: str, ok: bool, counterexample: Any = None) -> bool:
        entry = {"name": name, "status": "pass" if ok else "fail"}
        if not ok and counterexample is not None:
            entry["counterexample"] = jsonable(counterexample)
        self.checks.append(entry)
        return ok

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            d = dict(c)
            d["name"] = prefix + d["name"]
            self.checks.append(d)
        for k, v in other.dims.items():
            self.dims[prefix + k] = v

    @property
    def passed(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def failures(self) -> list[dict]:
        return [c for c in self.checks if c["status"] != "pass"]

    def to_json_dict(self, timing: bool = True) -> dict:
        out = {"suite": self.suite, "checks": self.checks, "dims": jsonable(self.dims)}
        if timing:
            out["wall_time"] = round(time.perf_counter() - self._t0, 3)
        return out


def first_mismatch(items, pred):
    """First item for which ``pred`` is false, or None."""
    for it in items:
        if not pred(it):
            return it
    return None
