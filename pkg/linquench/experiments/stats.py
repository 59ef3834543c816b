"""
Empirical summaries used by the experiments.

The standard normal distribution function is scipy.special.ndtr. Every
exceedance estimate carries its binomial standard error; verdicts use
one-sided z = 3 margins.
"""

import math
from typing import Tuple

import numpy as np
from scipy import special

Z_MARGIN = 3.0
ATOM_SLACK = 1e-9


def ks_statistic(samples: np.ndarray) -> float:
    """Two-sided Kolmogorov-Smirnov distance of the sample ECDF to N(0, 1)."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    m = len(x)
    if m == 0:
        raise ValueError("KS statistic of an empty sample")
    cdf = special.ndtr(x)
    i = np.arange(1, m + 1, dtype=np.float64)
    d_plus = np.max(i / m - cdf)
    d_minus = np.max(cdf - (i - 1) / m)
    return float(max(d_plus, d_minus))


def binomial_se(p: float, m: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / m)


def exceedance(values: np.ndarray, threshold: float, rel_slack: float = ATOM_SLACK) -> Tuple[float, float]:
    """
    Frequency of |value| >= threshold and its binomial standard error.

    The comparison uses threshold * (1 - rel_slack) so that an atom sitting
    exactly on the threshold counts.
    """
    values = np.asarray(values)
    p = float(np.mean(np.abs(values) >= threshold * (1.0 - rel_slack)))
    return p, binomial_se(p, len(values))


def sample_skewness(values: np.ndarray) -> Tuple[float, float]:
    """Moment skewness and its large-sample standard error sqrt(6/M)."""
    x = np.asarray(values, dtype=np.float64)
    centered = x - x.mean()
    var = float(np.mean(centered ** 2))
    if var == 0.0:
        return 0.0, math.sqrt(6.0 / len(x))
    return float(np.mean(centered ** 3) / var ** 1.5), math.sqrt(6.0 / len(x))


def second_moment(values: np.ndarray) -> Tuple[float, float]:
    """mean(x^2) for a sample with known zero mean, with its standard error."""
    sq = np.asarray(values, dtype=np.float64) ** 2
    return float(sq.mean()), float(sq.std() / math.sqrt(len(sq)))


def lower_margin(bound: float, se: float) -> float:
    """bound - 3 standard errors."""
    return bound - Z_MARGIN * se
