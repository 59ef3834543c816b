"""
Experiment report models
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List

import numpy as np

from ..artifacts import format_value


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INFO = "info"  # nothing declared to check


@dataclass(frozen=True)
class StatCheck:
    """One declared one-sided comparison: value <op> bound."""
    name: str
    value: float
    bound: float
    op: str  # '<', '<=', '>=', '>'
    passed: bool

    @classmethod
    def at_least(cls, name: str, value: float, bound: float) -> "StatCheck":
        return cls(name, float(value), float(bound), ">=", bool(value >= bound))

    @classmethod
    def below(cls, name: str, value: float, bound: float) -> "StatCheck":
        return cls(name, float(value), float(bound), "<", bool(value < bound))

    @classmethod
    def holds(cls, name: str, ok: bool) -> "StatCheck":
        return cls(name, 1.0 if ok else 0.0, 1.0, ">=", bool(ok))


@dataclass
class ExperimentReport:
    """
    Pure function of (configuration, seed).

    `tables` carry per-row detail (per-omega KS values, grid trajectories)
    and `samples` the normalized draws behind ECDF artifacts.
    """
    name: str
    params: Dict[str, Any]
    seed: int
    statistics: Dict[str, float] = field(default_factory=dict)
    checks: List[StatCheck] = field(default_factory=list)
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    samples: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def verdict(self) -> Verdict:
        if not self.checks:
            return Verdict.INFO
        return Verdict.PASS if all(c.passed for c in self.checks) else Verdict.FAIL

    @property
    def passed(self) -> bool:
        return self.verdict != Verdict.FAIL

    def stat(self, name: str) -> float:
        return self.statistics[name]

    def check(self, name: str) -> StatCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_rows(self) -> List[Dict[str, Any]]:
        rows: List[Dict[str, Any]] = [{"statistic": k, "value": v} for k, v in self.statistics.items()]
        for c in self.checks:
            rows.append({"statistic": f"check.{c.name}", "value": "pass" if c.passed else "fail"})
        rows.append({"statistic": "verdict", "value": self.verdict.value})
        return rows

    def to_text(self) -> str:
        lines = [f"Experiment: {self.name}", f"Seed: {self.seed}", "Parameters:"]
        lines.extend(f"  {k} = {v}" for k, v in self.params.items())
        lines.append("Statistics:")
        lines.extend(f"  {k} = {format_value(v)}" for k, v in self.statistics.items())
        if self.checks:
            lines.append("Checks:")
            for c in self.checks:
                status = "PASS" if c.passed else "FAIL"
                lines.append(f"  [{status}] {c.name}: {c.value!r} {c.op} {c.bound!r}")
        lines.append(f"Verdict: {self.verdict.value.upper()}")
        return "\n".join(lines)
