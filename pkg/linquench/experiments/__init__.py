"""
Experiments package - Monte Carlo runners, statistics and report writers
"""

from .models import Verdict, StatCheck, ExperimentReport
from .stats import (
    Z_MARGIN,
    ATOM_SLACK,
    ks_statistic,
    binomial_se,
    exceedance,
    sample_skewness,
    second_moment,
    lower_margin,
)
from .runners import (
    annealed_clt,
    quenched_clt_theorem1,
    quenched_failure_tail,
    wip_failure_max,
    weighted_orbit_average,
    tn_convergence,
    ratio_trends,
    simulate,
)
from .reporting import write_report, write_ecdf_svg

__all__ = [
    "Verdict",
    "StatCheck",
    "ExperimentReport",
    "Z_MARGIN",
    "ATOM_SLACK",
    "ks_statistic",
    "binomial_se",
    "exceedance",
    "sample_skewness",
    "second_moment",
    "lower_margin",
    "annealed_clt",
    "quenched_clt_theorem1",
    "quenched_failure_tail",
    "wip_failure_max",
    "weighted_orbit_average",
    "tn_convergence",
    "ratio_trends",
    "simulate",
    "write_report",
    "write_ecdf_svg",
]
