"""
Process package - coefficient calculus for causal linear processes
"""

from .models import CoefficientSeq, VarianceProfile
from .calculus import (
    compensated_cumsum,
    partial_sums,
    variance_profile,
    projection_norms,
    sigma_nondecreasing,
    max_abs_partial_sum,
    sigma_ratio,
)
from .io import read_coefficients_csv, write_coefficients_csv

__all__ = [
    "CoefficientSeq",
    "VarianceProfile",
    "compensated_cumsum",
    "partial_sums",
    "variance_profile",
    "projection_norms",
    "sigma_nondecreasing",
    "max_abs_partial_sum",
    "sigma_ratio",
    "read_coefficients_csv",
    "write_coefficients_csv",
]
