"""Check records and JSON reports shared by the verifiers and the CLI."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "Check", "Report"]


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    seconds: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail"}
        if self.witness is not None:
            out["witness"] = self.witness
        if timing:
            out["seconds"] = round(self.seconds, 4)
        return out


@dataclass
class Report:
    """An append-only list of checks plus free-form result data."""

    command: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, witness: Any = None, seconds: float = 0.0) -> Check:
        c = Check(name, bool(passed), witness, seconds)
        self.checks.append(c)
        return c

    @contextmanager
    def timed(self, name: str):
        """Record a check whose outcome is set through the yielded dict."""
        slot = {"passed": True, "witness": None}
        start = time.perf_counter()
        try:
            yield slot
        finally:
            self.add(name, slot["passed"], slot["witness"], time.perf_counter() - start)

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.seconds))
        for k, v in other.data.items():
            self.data[prefix + k] = v

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self, timing: bool = True) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            **self.meta,
            "passed": self.passed,
            "counts": {"total": len(self.checks), "failed": len(self.failures)},
            "checks": [c.to_json(timing) for c in self.checks],
            "data": self.data,
        }

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=False)
