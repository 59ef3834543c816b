"""
Data models for causal linear processes.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from ..errors import InvalidSpecError


@dataclass(frozen=True)
class CoefficientSeq:
    """
    Causal coefficients a_0..a_L of f = sum_i a_i e o T^{-i}.

    `tail_l2` is a certified bound on sum_{i>L} a_i^2; zero means the
    support is exactly {0..L}.
    """
    values: Tuple[float, ...]
    tail_l2: float = 0.0

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not all(math.isfinite(v) for v in values):
            raise InvalidSpecError("coefficients must be finite")
        if not math.isfinite(self.tail_l2) or self.tail_l2 < 0:
            raise InvalidSpecError(f"tail_l2 must be a finite nonnegative number, got {self.tail_l2}")

    @classmethod
    def of(cls, values: Sequence[float], tail_l2: float = 0.0) -> "CoefficientSeq":
        return cls(tuple(values), float(tail_l2))

    @property
    def support_length(self) -> int:
        """L, the largest index carried explicitly."""
        return max(len(self.values) - 1, 0)

    @property
    def exact(self) -> bool:
        return self.tail_l2 == 0.0

    @property
    def l2_norm_sq(self) -> float:
        """A^2 = sum_{i>=0} a_i^2 (tail bound included)."""
        return math.fsum(v * v for v in self.values) + self.tail_l2

    def as_array(self) -> np.ndarray:
        if not self.values:
            return np.zeros(1)
        return np.asarray(self.values, dtype=np.float64)

    def scaled(self, factor: float) -> "CoefficientSeq":
        return CoefficientSeq(tuple(factor * v for v in self.values), factor * factor * self.tail_l2)


@dataclass(frozen=True, eq=False)
class VarianceProfile:
    """
    Variance calculus of a coefficient sequence up to n_max.

    Every array except `b` is indexed by n, with entry 0 standing for the
    empty sum S_0 = 0. `b` holds b_0..b_{n_max + past_window}.
    """
    coefficients: CoefficientSeq
    n_max: int
    past_window: int
    b: np.ndarray
    sigma_bar_sq: np.ndarray
    cond_exp_norm_sq: np.ndarray
    sigma_sq: np.ndarray = field(repr=False)

    def sigma(self, n: int) -> float:
        return math.sqrt(self.sigma_sq[n])

    def sigma_bar(self, n: int) -> float:
        return math.sqrt(self.sigma_bar_sq[n])

    def cond_exp_norm(self, n: int) -> float:
        return math.sqrt(self.cond_exp_norm_sq[n])

    def covers(self, n: int) -> bool:
        return 0 <= n <= self.n_max
