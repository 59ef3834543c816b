"""
Exact coefficient calculus for causal linear processes.

For f = sum_i a_i e o T^{-i} and b_j = a_0 + ... + a_{j-1}:

    S_n - E(S_n | F_0) = sum_{k=1}^{n-1} b_{n-k} e o T^k
    E(S_n | F_0)       = sum_{k<=0} (b_{n-k} - b_{-k}) e o T^k

so every second moment reduces to sums of squared prefix sums. Nothing
here is random; the functions are pure and their results immutable.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from ..errors import PreconditionError
from .models import CoefficientSeq, VarianceProfile

logger = logging.getLogger(__name__)


def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Running sums in ascending index order with Neumaier compensation."""
    out = np.empty(len(values), dtype=np.float64)
    total = 0.0
    comp = 0.0
    for i, x in enumerate(np.asarray(values, dtype=np.float64).tolist()):
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
        out[i] = total + comp
    return out


def partial_sums(a: CoefficientSeq, m: int) -> np.ndarray:
    """b_0..b_m with b_0 = 0 and b_j - b_{j-1} = a_{j-1}."""
    if m < 0:
        raise PreconditionError(f"partial_sums needs m >= 0, got {m}")
    coeffs = a.as_array()
    padded = np.zeros(m, dtype=np.float64)
    count = min(len(coeffs), m)
    padded[:count] = coeffs[:count]
    b = np.zeros(m + 1, dtype=np.float64)
    b[1:] = compensated_cumsum(padded)
    return b


def variance_profile(
    a: CoefficientSeq,
    n_max: int,
    past_window: Optional[int] = None,
) -> VarianceProfile:
    """
    Compute sigma_bar_n^2, ||E(S_n|F_0)||^2 and sigma_n^2 for n = 1..n_max.

    Args:
        a: Coefficient sequence
        n_max: Largest n covered
        past_window: Number of past times kept in E(S_n|F_0); defaults to
            the support length, which makes the conditional part exact

    Raises:
        PreconditionError: n_max < 1, or past_window shorter than an exact
            support (the past sum would be silently truncated)
    """
    if n_max < 1:
        raise PreconditionError(f"variance_profile needs n_max >= 1, got {n_max}")

    support = a.support_length
    window = support if past_window is None else int(past_window)
    if window < support:
        if a.exact:
            raise PreconditionError(
                f"past_window={window} is shorter than the exact support length {support}"
            )
        logger.warning(f"[profile] past_window={window} truncates a support of length {support}")
    if not a.exact:
        logger.warning(f"[profile] tail_l2={a.tail_l2} > 0: values use the explicit support only")

    b = partial_sums(a, n_max + window)
    b_sq = b * b

    sigma_bar_sq = np.zeros(n_max + 1, dtype=np.float64)
    sigma_bar_sq[2:] = compensated_cumsum(b_sq[1:n_max])

    # For n > L every b_{n+m} equals the full sum, so the past part is constant.
    cond = np.zeros(n_max + 1, dtype=np.float64)
    head = b[: window + 1]
    stable_from = min(support + 1, n_max)
    for n in range(1, stable_from + 1):
        diff = b[n: n + window + 1] - head
        cond[n] = float(np.dot(diff, diff))
    cond[stable_from + 1:] = cond[stable_from]

    sigma_sq = sigma_bar_sq + cond
    for arr in (b, sigma_bar_sq, cond, sigma_sq):
        arr.setflags(write=False)

    return VarianceProfile(
        coefficients=a,
        n_max=n_max,
        past_window=window,
        b=b,
        sigma_bar_sq=sigma_bar_sq,
        cond_exp_norm_sq=cond,
        sigma_sq=sigma_sq,
    )


def projection_norms(a: CoefficientSeq) -> Tuple[float, ...]:
    """||P_0 U^i f||_2 = |a_i| for i = 0..L."""
    return tuple(abs(v) for v in a.as_array().tolist())


def sigma_nondecreasing(profile: VarianceProfile, rel_tol: float = 1e-12) -> bool:
    """True when sigma_n <= sigma_{n+1} for every covered n >= 1."""
    s = profile.sigma_sq[1:]
    if len(s) < 2:
        return True
    steps = np.diff(s)
    return bool(np.all(steps >= -rel_tol * np.maximum(s[1:], 1.0)))


def max_abs_partial_sum(profile: VarianceProfile, n: Optional[int] = None) -> float:
    """max_{j<=n} |b_j|, over the whole computed range when n is None."""
    b = profile.b if n is None else profile.b[: n + 1]
    return float(np.max(np.abs(b)))


def sigma_ratio(profile: VarianceProfile, n: int) -> float:
    """sigma_bar_n / sigma_n, or nan where sigma_n vanishes."""
    s = profile.sigma_sq[n]
    if s <= 0:
        return math.nan
    return math.sqrt(profile.sigma_bar_sq[n] / s)
