"""
Sampler package - F_0-atoms, innovations, path sums and replicate kernels
"""

from .models import OmegaState, PathSample, ConditionalLaw
from .streams import Stream, SignStream, derive_seed, rng_for, random_signs
from .omega import sample_omega, force_bad_omega
from .paths import (
    tower_events,
    innovation_at,
    innovation_window,
    past_atoms,
    path_sum,
    brute_force_path,
    brute_force_variance,
)
from .batch import (
    conditional_law,
    annealed_linear_sums,
    annealed_terminal_sums,
    annealed_block_maxima,
    stationarity_moments,
)
from .pool import (
    ReplicatePool,
    PoolState,
    PoolStats,
    get_replicate_pool,
    init_replicate_pool,
    shutdown_replicate_pool,
)

__all__ = [
    "OmegaState",
    "PathSample",
    "ConditionalLaw",
    "Stream",
    "SignStream",
    "derive_seed",
    "rng_for",
    "random_signs",
    "sample_omega",
    "force_bad_omega",
    "tower_events",
    "innovation_at",
    "innovation_window",
    "past_atoms",
    "path_sum",
    "brute_force_path",
    "brute_force_variance",
    "conditional_law",
    "annealed_linear_sums",
    "annealed_terminal_sums",
    "annealed_block_maxima",
    "stationarity_moments",
    "ReplicatePool",
    "PoolState",
    "PoolStats",
    "get_replicate_pool",
    "init_replicate_pool",
    "shutdown_replicate_pool",
]
