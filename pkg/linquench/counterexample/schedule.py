"""
Block-weight schedule.

    gamma_k = 2/(k+2) * prod_{j=1}^{k} (1 - 1/(j+1)) = 2 / ((k+1)(k+2))

The raw weights telescope, sum_{k<=K} gamma_k = 1 - 2/(K+2), and satisfy
1 - sum_{j<k} gamma_j = (k+2) gamma_k.
"""

import math
from typing import Tuple

import numpy as np

from ..errors import PreconditionError
from ..process import compensated_cumsum


def raw_gamma(K: int) -> np.ndarray:
    """gamma_1..gamma_K from the product formula."""
    if K < 1:
        raise PreconditionError(f"gamma schedule needs K >= 1, got {K}")
    k = np.arange(1, K + 1, dtype=np.float64)
    products = np.cumprod(1.0 - 1.0 / (k + 1.0))
    return 2.0 / (k + 2.0) * products


def gamma_schedule(K: int, renormalize: bool = True) -> Tuple[float, ...]:
    """Weights for a truncation at K, renormalized to sum to 1 unless asked otherwise."""
    gamma = raw_gamma(K)
    if not renormalize:
        return tuple(gamma.tolist())
    total = math.fsum(gamma.tolist())
    return tuple((gamma / total).tolist())


def gamma_identity_residuals(K: int) -> Tuple[float, float]:
    """
    Residuals of the two schedule identities up to K.

    Returns:
        (|sum_{k<=K} gamma_k - (1 - 2/(K+2))|,
         max_k |(k+2) gamma_k - (1 - sum_{j<k} gamma_j)|)
    """
    gamma = raw_gamma(K)
    telescoping = abs(math.fsum(gamma.tolist()) - (1.0 - 2.0 / (K + 2)))
    before = np.concatenate(([0.0], compensated_cumsum(gamma)[:-1]))
    k = np.arange(1, K + 1, dtype=np.float64)
    identity = float(np.max(np.abs((k + 2.0) * gamma - (1.0 - before))))
    return telescoping, identity
