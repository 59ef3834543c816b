"""
Checkers for the sufficient conditions of the quenched CLT.

- Hannan: sum_i ||P_0 U^i f||_2 = sum_i |a_i| < inf
- Maxwell-Woodroofe: sum_n ||E(S_n|F_0)||_2 / n^{3/2} < inf
- cond2: sup_n max_{k<=n} n b_k^2 / sigma_bar_n^2 < inf

cond2 is a supremum over all n, so a finite range cannot certify it. The
checker reports c over n <= n_max together with a log-log slope heuristic.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from ..counterexample import CounterexampleSpec, mw_tail_bound
from ..errors import DegenerateProcessError, PreconditionError
from ..process import CoefficientSeq, VarianceProfile, max_abs_partial_sum
from .models import (
    BoundedGrowthCheck,
    Condition2Result,
    ConditionReport,
    ExtendedReal,
    HeydeHeuristic,
)

logger = logging.getLogger(__name__)

SLOPE_GRID_POINTS = 40
DEFAULT_SLOPE_LIMIT = 0.1


def check_condition2(
    profile: VarianceProfile,
    n_max: Optional[int] = None,
    slope_limit: float = DEFAULT_SLOPE_LIMIT,
) -> Condition2Result:
    """
    Evaluate c = max_{2<=n<=n_max} max_{1<=k<=n} n b_k^2 / sigma_bar_n^2.

    Ties go to the smallest n, then the smallest k. Values of n with
    sigma_bar_n^2 = 0 are skipped.

    Raises:
        PreconditionError: n_max < 2 or beyond the profile
        DegenerateProcessError: every b_k vanishes, or sigma_bar_n^2 = 0 on the whole range
    """
    n_max = profile.n_max if n_max is None else int(n_max)
    if n_max < 2:
        raise PreconditionError(f"check_condition2 needs n_max >= 2, got {n_max}")
    if n_max > profile.n_max:
        raise PreconditionError(f"n_max={n_max} exceeds the profile range {profile.n_max}")

    b_sq = np.asarray(profile.b[1: n_max + 1]) ** 2
    running_max = np.maximum.accumulate(b_sq)
    sigma_bar_sq = np.asarray(profile.sigma_bar_sq[2: n_max + 1])
    ns = np.arange(2, n_max + 1)
    valid = sigma_bar_sq > 0
    if not np.any(b_sq > 0) or not np.any(valid):
        raise DegenerateProcessError("degenerate process: all partial sums b_k vanish on the range")

    ratio = np.full(len(ns), -np.inf)
    ratio[valid] = ns[valid] * running_max[1:][valid] / sigma_bar_sq[valid]

    idx = int(np.argmax(ratio))
    n_star = idx + 2
    k_star = int(np.argmax(b_sq[:n_star] == running_max[n_star - 1])) + 1
    c = float(ratio[idx])

    slope = _log_slope(ns[valid], ratio[valid])
    bounded = bool(math.isfinite(slope) and slope < slope_limit)
    logger.debug(f"[cond2] c={c} at ({n_star}, {k_star}) slope={slope}")
    return Condition2Result(c=c, witness=(n_star, k_star), n_max=n_max, slope=slope, bounded=bounded)


def _log_slope(ns: np.ndarray, values: np.ndarray) -> float:
    """Least-squares slope of log(values) on log(n) over the upper half of a log grid."""
    if len(ns) < 2:
        return math.nan
    targets = np.unique(np.geomspace(ns[0], ns[-1], SLOPE_GRID_POINTS).astype(np.int64))
    positions = np.unique(np.searchsorted(ns, targets))
    positions = positions[positions < len(ns)]
    upper = positions[len(positions) // 2:]
    if len(upper) < 3:
        return math.nan
    x = np.log(ns[upper].astype(np.float64))
    y = np.log(values[upper])
    return float(np.polyfit(x, y, 1)[0])


def hannan_sum(a: CoefficientSeq) -> ExtendedReal:
    """sum |a_i| over the explicit support; only a lower bound when a tail is declared."""
    total = math.fsum(abs(v) for v in a.values)
    if a.exact:
        return ExtendedReal.finite(total)
    return ExtendedReal.lower_bound(total)


def maxwell_woodroofe_sum(
    profile: VarianceProfile,
    n_max: int,
    spec: Optional[CounterexampleSpec] = None,
) -> Tuple[float, ExtendedReal]:
    """
    Partial sum sum_{n<=n_max} ||E(S_n|F_0)||_2 / n^{3/2} and a bound on the rest.

    The remainder bound is available only when the profile comes from a
    counterexample spec (pass it as `spec`); otherwise it is 'unknown'.
    """
    if not 1 <= n_max <= profile.n_max:
        raise PreconditionError(f"n_max={n_max} outside the profile range 1..{profile.n_max}")
    ns = np.arange(1, n_max + 1, dtype=np.float64)
    terms = np.sqrt(profile.cond_exp_norm_sq[1: n_max + 1]) / ns ** 1.5
    partial = math.fsum(terms.tolist())
    if spec is None:
        return partial, ExtendedReal.unknown()
    return partial, ExtendedReal.finite(mw_tail_bound(spec, n_max))


def check_bounded_growth(profile: VarianceProfile, floor: float = 0.01) -> BoundedGrowthCheck:
    """min of sigma_bar_n^2 / n over the upper half of the range and sup |b_k|."""
    lo = max(profile.n_max // 2, 2)
    ns = np.arange(lo, profile.n_max + 1, dtype=np.float64)
    if len(ns) == 0:
        raise PreconditionError("profile too short for a growth check")
    growth = np.asarray(profile.sigma_bar_sq[lo:]) / ns
    return BoundedGrowthCheck(
        min_growth_ratio=float(np.min(growth)),
        b_sup=max_abs_partial_sum(profile, profile.n_max),
        floor=floor,
    )


def heyde_heuristic(profile: VarianceProfile) -> HeydeHeuristic:
    m = profile.n_max
    b_m = float(profile.b[m])
    return HeydeHeuristic(
        b_limit=b_m,
        b_increment=abs(b_m - float(profile.b[m // 2])),
        variance_gap=abs(float(profile.sigma_sq[m]) / m - b_m * b_m),
    )


def condition_report(
    profile: VarianceProfile,
    n_max: Optional[int] = None,
    spec: Optional[CounterexampleSpec] = None,
    growth_floor: float = 0.01,
    slope_limit: float = DEFAULT_SLOPE_LIMIT,
) -> ConditionReport:
    """Run every checker on one profile."""
    n_max = profile.n_max if n_max is None else n_max
    partial, tail = maxwell_woodroofe_sum(profile, n_max, spec)
    report = ConditionReport(
        hannan_sum=hannan_sum(profile.coefficients),
        mw_partial=partial,
        mw_tail_bound=tail,
        cond2=check_condition2(profile, n_max, slope_limit),
        growth=check_bounded_growth(profile, growth_floor),
        heyde=heyde_heuristic(profile),
    )
    report.extras["max_abs_b"] = max_abs_partial_sum(profile, n_max)
    return report
