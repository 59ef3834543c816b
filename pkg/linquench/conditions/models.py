"""
Result models for the sufficient-condition checkers.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple


class BoundKind(str, Enum):
    FINITE = "finite"
    LOWER_BOUND = "lower_bound"
    INFINITE = "infinite"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ExtendedReal:
    """A real number, a one-sided bound, +infinity, or 'unknown'."""
    kind: BoundKind
    value: Optional[float] = None

    @classmethod
    def finite(cls, value: float) -> "ExtendedReal":
        return cls(BoundKind.FINITE, float(value))

    @classmethod
    def lower_bound(cls, value: float) -> "ExtendedReal":
        return cls(BoundKind.LOWER_BOUND, float(value))

    @classmethod
    def infinite(cls) -> "ExtendedReal":
        return cls(BoundKind.INFINITE)

    @classmethod
    def unknown(cls) -> "ExtendedReal":
        return cls(BoundKind.UNKNOWN)

    @property
    def is_finite(self) -> bool:
        return self.kind == BoundKind.FINITE

    def __str__(self) -> str:
        if self.kind == BoundKind.FINITE:
            return repr(self.value)
        if self.kind == BoundKind.LOWER_BOUND:
            return f">={self.value!r}"
        if self.kind == BoundKind.INFINITE:
            return "inf"
        return "unknown"


@dataclass(frozen=True)
class Condition2Result:
    """
    Finite-range evaluation of sup_n max_{k<=n} n b_k^2 / sigma_bar_n^2.

    `slope` is the least-squares slope of log(max_k n b_k^2 / sigma_bar_n^2)
    against log n over the upper half of a log-spaced grid; nan when the
    range is too short to fit. `bounded` is the heuristic verdict.
    """
    c: float
    witness: Tuple[int, int]
    n_max: int
    slope: float
    bounded: bool

    def __iter__(self):
        # Unpacks as (c, witness).
        yield self.c
        yield self.witness


@dataclass(frozen=True)
class BoundedGrowthCheck:
    """Bounded b_k together with linear growth of sigma_bar_n^2 implies bounded cond2 weights."""
    min_growth_ratio: float  # min of sigma_bar_n^2 / n over the upper half of the range
    b_sup: float
    floor: float

    @property
    def holds(self) -> bool:
        return self.min_growth_ratio >= self.floor and math.isfinite(self.b_sup)


@dataclass(frozen=True)
class HeydeHeuristic:
    """Labeled heuristic only: b_M settles and sigma_M^2 / M approaches b_M^2."""
    b_limit: float
    b_increment: float  # |b_M - b_{M/2}|
    variance_gap: float  # |sigma_M^2 / M - b_M^2|


@dataclass
class ConditionReport:
    hannan_sum: ExtendedReal
    mw_partial: float
    mw_tail_bound: ExtendedReal
    cond2: Condition2Result
    growth: Optional[BoundedGrowthCheck] = None
    heyde: Optional[HeydeHeuristic] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def cond2_c(self) -> float:
        return self.cond2.c

    @property
    def cond2_n_max(self) -> int:
        return self.cond2.n_max

    def to_row(self) -> Dict[str, Any]:
        """Flat CSV row with a fixed column order."""
        row: Dict[str, Any] = {
            "hannan_sum": str(self.hannan_sum),
            "mw_partial": self.mw_partial,
            "mw_tail_bound": str(self.mw_tail_bound),
            "cond2_c": self.cond2.c,
            "cond2_n_max": self.cond2.n_max,
            "cond2_witness_n": self.cond2.witness[0],
            "cond2_witness_k": self.cond2.witness[1],
            "cond2_slope": self.cond2.slope,
            "cond2_bounded": self.cond2.bounded,
        }
        if self.growth is not None:
            row["growth_min_ratio"] = self.growth.min_growth_ratio
            row["growth_b_sup"] = self.growth.b_sup
            row["growth_holds"] = self.growth.holds
        if self.heyde is not None:
            row["heyde_b_limit"] = self.heyde.b_limit
            row["heyde_b_increment"] = self.heyde.b_increment
            row["heyde_variance_gap"] = self.heyde.variance_gap
        row.update(self.extras)
        return row

    def to_text(self) -> str:
        n, k = self.cond2.witness
        lines = [
            "Condition report",
            f"  Hannan sum            {self.hannan_sum}",
            f"  Maxwell-Woodroofe     partial={self.mw_partial!r} tail_bound={self.mw_tail_bound}",
            f"  cond2 weights         c={self.cond2.c!r} at (n={n}, k={k}), n_max={self.cond2.n_max}",
            f"                        log-slope={self.cond2.slope!r} bounded={self.cond2.bounded}",
        ]
        if self.growth is not None:
            lines.append(
                f"  bounded-b growth      min sigma_bar^2/n={self.growth.min_growth_ratio!r} "
                f"sup|b|={self.growth.b_sup!r} holds={self.growth.holds}"
            )
        if self.heyde is not None:
            lines.append(
                f"  Heyde (heuristic)     b_M={self.heyde.b_limit!r} "
                f"|b_M-b_M/2|={self.heyde.b_increment!r} |sigma^2/M-b^2|={self.heyde.variance_gap!r}"
            )
        return "\n".join(lines)
