"""
Sampler data models
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class OmegaState:
    """
    A realized F_0-atom.

    Tower k (1-based) fires at time t iff (phases[k-1] + t) mod tower_heights[k-1] == 0.
    `past_signs` holds the innovation sign for every firing at -past_window <= t <= 0.
    """
    phases: Tuple[int, ...]
    tower_heights: Tuple[int, ...]
    past_signs: Dict[Tuple[int, int], float]
    seed: int
    past_window: int
    draws: int = 1  # phase draws used (rejection sampling may need several)

    def aligned(self, k: int, t: int) -> bool:
        return (self.phases[k - 1] + t) % self.tower_heights[k - 1] == 0

    def aligned_towers(self, t: int) -> Tuple[int, ...]:
        return tuple(k for k in range(1, len(self.phases) + 1) if self.aligned(k, t))


@dataclass(frozen=True, eq=False)
class PathSample:
    s: np.ndarray  # S_1..S_N
    cond_exp: float  # E(S_N | F_0)
    innovations_used: int

    @property
    def terminal(self) -> float:
        return float(self.s[-1])


@dataclass(frozen=True, eq=False)
class ConditionalLaw:
    """
    M draws from m_omega of S_N - E(S_N|F_0), sharing omega's F_0 data.

    `centered` holds the raw centered sums; the properties give the
    normalizations used by the experiments.
    """
    centered: np.ndarray
    cond_exp: float
    sigma_n: float
    sigma_bar_n: float
    N: int
    omega_seed: int
    future_events: int = 0
    variance: float = 0.0  # exact m_omega variance of the centered sum

    @property
    def replicates(self) -> int:
        return len(self.centered)

    @property
    def centered_normalized(self) -> np.ndarray:
        return self.centered / self.sigma_n

    @property
    def uncentered_normalized(self) -> np.ndarray:
        return (self.centered + self.cond_exp) / self.sigma_n

    @property
    def cond_exp_normalized(self) -> float:
        return self.cond_exp / self.sigma_n

    @property
    def centered_over_sigma_bar(self) -> np.ndarray:
        return self.centered / self.sigma_bar_n
