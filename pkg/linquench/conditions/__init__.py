"""
Conditions package - Hannan, Maxwell-Woodroofe and cond2 checkers
"""

from .models import (
    BoundKind,
    ExtendedReal,
    Condition2Result,
    BoundedGrowthCheck,
    HeydeHeuristic,
    ConditionReport,
)
from .checks import (
    check_condition2,
    hannan_sum,
    maxwell_woodroofe_sum,
    check_bounded_growth,
    heyde_heuristic,
    condition_report,
)

__all__ = [
    "BoundKind",
    "ExtendedReal",
    "Condition2Result",
    "BoundedGrowthCheck",
    "HeydeHeuristic",
    "ConditionReport",
    "check_condition2",
    "hannan_sum",
    "maxwell_woodroofe_sum",
    "check_bounded_growth",
    "heyde_heuristic",
    "condition_report",
]
