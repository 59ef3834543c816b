"""
Counterexample package - block schedule, coefficients and tower innovation
"""

from .models import (
    CounterexampleSpec,
    InnovationSpec,
    ConstraintCheck,
    ValidationReport,
    MWComponentBound,
    MWCertificate,
)
from .schedule import raw_gamma, gamma_schedule, gamma_identity_residuals
from .builder import (
    tower_normalizer,
    default_scheduled,
    build_counterexample,
    coefficients_of_f,
    closed_form_b,
    counterexample_profile,
    component_coefficients,
    innovation_spec,
    validate_schedule,
    mw_component_bounds,
    mw_tail_bound,
)

__all__ = [
    "CounterexampleSpec",
    "InnovationSpec",
    "ConstraintCheck",
    "ValidationReport",
    "MWComponentBound",
    "MWCertificate",
    "raw_gamma",
    "gamma_schedule",
    "gamma_identity_residuals",
    "tower_normalizer",
    "default_scheduled",
    "build_counterexample",
    "coefficients_of_f",
    "closed_form_b",
    "counterexample_profile",
    "component_coefficients",
    "innovation_spec",
    "validate_schedule",
    "mw_component_bounds",
    "mw_tail_bound",
]
