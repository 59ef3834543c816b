"""
linquench - quenched vs. annealed central limit behavior of causal linear processes

Library usage:
    from linquench import CoefficientSeq, variance_profile, condition_report

    a = CoefficientSeq.of([1.0, 0.5, 0.25, 0.125])
    profile = variance_profile(a, n_max=4096)
    print(condition_report(profile).to_text())

    from linquench import build_counterexample, quenched_failure_tail

    spec = build_counterexample(K=2, V=[4, 16], N=[128, 512], kappa=[4, 4])
    report = quenched_failure_tail(spec, k=1, M=10_000, seed=42)
    print(report.to_text())
"""

__version__ = "0.4.0"
__author__ = "linquench contributors"

from linquench.process import CoefficientSeq, VarianceProfile, variance_profile
from linquench.conditions import ConditionReport, check_condition2, condition_report
from linquench.counterexample import (
    CounterexampleSpec,
    InnovationSpec,
    build_counterexample,
    coefficients_of_f,
    validate_schedule,
)
from linquench.experiments import (
    ExperimentReport,
    annealed_clt,
    quenched_clt_theorem1,
    quenched_failure_tail,
    wip_failure_max,
    tn_convergence,
    ratio_trends,
)

__all__ = [
    # Coefficient calculus
    "CoefficientSeq",
    "VarianceProfile",
    "variance_profile",
    # Conditions
    "ConditionReport",
    "check_condition2",
    "condition_report",
    # Counterexample
    "CounterexampleSpec",
    "InnovationSpec",
    "build_counterexample",
    "coefficients_of_f",
    "validate_schedule",
    # Experiments
    "ExperimentReport",
    "annealed_clt",
    "quenched_clt_theorem1",
    "quenched_failure_tail",
    "wip_failure_max",
    "tn_convergence",
    "ratio_trends",
    # Version
    "__version__",
    "__author__",
]
