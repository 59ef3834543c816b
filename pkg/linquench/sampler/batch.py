"""
Batched replicate kernels.

- conditional_law: many future-sign draws for one fixed F_0-atom
- annealed_linear_sums: a fixed linear functional of the innovations with
  fresh phases and signs per replicate (the unconditional law)
- annealed_block_maxima: running maxima of |S_n - E(S_n|F_0)| and |S_n|
  over a time block, fresh phases and signs per replicate

All kernels are chunked through a ReplicatePool; chunk c of a kernel draws
from the stream (seed, stream tag, c) only.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import signal

from ..counterexample import InnovationSpec
from ..errors import PreconditionError
from ..process import CoefficientSeq, VarianceProfile, partial_sums, variance_profile
from .models import ConditionalLaw, OmegaState
from .paths import past_atoms, tower_events
from .pool import ReplicatePool, get_replicate_pool
from .streams import Stream, random_signs, rng_for

logger = logging.getLogger(__name__)


def _profile_for(a: CoefficientSeq, N: int, past_window: int, profile: Optional[VarianceProfile]) -> VarianceProfile:
    if profile is not None and profile.covers(N):
        return profile
    return variance_profile(a, N, past_window=past_window)


def conditional_law(
    a: CoefficientSeq,
    omega: OmegaState,
    N: int,
    M: int,
    seed: int,
    spec: InnovationSpec,
    profile: Optional[VarianceProfile] = None,
    pool: Optional[ReplicatePool] = None,
) -> ConditionalLaw:
    """
    M replicates of S_N - E(S_N|F_0) under m_omega.

    Given omega the future firing times are fixed, so the centered sum is
    sum over future events of w_k b_{N-t} xi; only the signs are redrawn.
    """
    if M < 100:
        raise PreconditionError(f"conditional_law needs M >= 100, got {M}")
    if N < 1:
        raise PreconditionError(f"conditional_law needs N >= 1, got {N}")
    W = omega.past_window
    if W < a.support_length:
        raise PreconditionError(f"past window {W} shorter than the support length {a.support_length}")
    profile = _profile_for(a, N, W, profile)
    sigma_n = profile.sigma(N)
    if sigma_n <= 0:
        raise PreconditionError(f"sigma_N vanishes at N={N}")
    pool = pool or get_replicate_pool()

    b = partial_sums(a, N + W)
    pieces = []
    for k in range(1, spec.K + 1):
        _, times = tower_events(np.array([omega.phases[k - 1]]), spec.height(k), 1, N - 1)
        pieces.append(spec.weight(k) * b[N - times])
    coef = np.concatenate(pieces) if pieces else np.zeros(0)

    times, values = past_atoms(omega, spec)
    cond_exp = float(np.dot(b[N - times] - b[-times], values)) if len(times) else 0.0

    def run_chunk(chunk: int, start: int, count: int) -> np.ndarray:
        if len(coef) == 0:
            return np.zeros(count)
        rng = rng_for(seed, Stream.REPLICATE, chunk)
        return random_signs(rng, (count, len(coef))) @ coef

    centered = pool.map_chunks(run_chunk, M)
    return ConditionalLaw(
        centered=centered,
        cond_exp=cond_exp,
        sigma_n=sigma_n,
        sigma_bar_n=profile.sigma_bar(N),
        N=N,
        omega_seed=omega.seed,
        future_events=len(coef),
        variance=float(np.dot(coef, coef)),
    )


def annealed_linear_sums(
    weights: np.ndarray,
    lo: int,
    spec: InnovationSpec,
    M: int,
    seed: int,
    stream: int = Stream.ANNEALED,
    pool: Optional[ReplicatePool] = None,
) -> np.ndarray:
    """
    M unconditional draws of sum_tau weights[tau - lo] e o T^tau.

    Phases and all signs are fresh per replicate.
    """
    weights = np.asarray(weights, dtype=np.float64)
    hi = lo + len(weights) - 1
    heights = np.asarray(spec.tower_heights)
    pool = pool or get_replicate_pool()

    def run_chunk(chunk: int, start: int, count: int) -> np.ndarray:
        rng = rng_for(seed, stream, chunk)
        phases = rng.integers(0, heights, size=(count, spec.K))
        total = np.zeros(count)
        for k in range(1, spec.K + 1):
            rows, times = tower_events(phases[:, k - 1], spec.height(k), lo, hi)
            if len(times) == 0:
                continue
            contrib = spec.weight(k) * random_signs(rng, len(times)) * weights[times - lo]
            total += np.bincount(rows, weights=contrib, minlength=count)
        return total

    return pool.map_chunks(run_chunk, M)


def annealed_terminal_sums(
    a: CoefficientSeq,
    spec: InnovationSpec,
    N: int,
    M: int,
    seed: int,
    past_window: Optional[int] = None,
    pool: Optional[ReplicatePool] = None,
) -> np.ndarray:
    """M unconditional draws of S_N = sum_tau (b_{N-tau} - b_{max(-tau,0)}) e o T^tau."""
    if N < 1:
        raise PreconditionError(f"annealed sums need N >= 1, got {N}")
    W = a.support_length if past_window is None else past_window
    b = partial_sums(a, N + W)
    tau = np.arange(-W, N)
    weights = b[N - tau] - b[np.maximum(-tau, 0)]
    return annealed_linear_sums(weights, -W, spec, M, seed, Stream.ANNEALED, pool)


def annealed_block_maxima(
    a: CoefficientSeq,
    spec: InnovationSpec,
    lo: int,
    hi: int,
    M: int,
    seed: int,
    past_window: Optional[int] = None,
    pool: Optional[ReplicatePool] = None,
) -> np.ndarray:
    """
    Per replicate, max over lo <= n < hi of |S_n - E(S_n|F_0)| and of |S_n|.

    Returns:
        (M, 2) array; column 0 is the centered maximum, column 1 the uncentered one
    """
    if not 1 <= lo < hi:
        raise PreconditionError(f"block [{lo}, {hi}) is empty or starts before 1")
    W = a.support_length if past_window is None else past_window
    heights = np.asarray(spec.tower_heights)
    coeffs = a.as_array()
    width = W + hi - 1  # times -W..hi-2 drive S_1..S_{hi-1}
    pool = pool or get_replicate_pool()

    def run_chunk(chunk: int, start: int, count: int) -> np.ndarray:
        rng = rng_for(seed, Stream.BLOCK, chunk)
        phases = rng.integers(0, heights, size=(count, spec.K))
        e_past = np.zeros((count, width))
        e_future = np.zeros((count, width))
        for k in range(1, spec.K + 1):
            rows, times = tower_events(phases[:, k - 1], spec.height(k), -W, hi - 2)
            if len(times) == 0:
                continue
            vals = spec.weight(k) * random_signs(rng, len(times))
            past = times <= 0
            e_past[rows[past], times[past] + W] += vals[past]
            e_future[rows[~past], times[~past] + W] += vals[~past]
        centered = np.cumsum(signal.lfilter(coeffs, [1.0], e_future, axis=1)[:, W:], axis=1)
        conditional = np.cumsum(signal.lfilter(coeffs, [1.0], e_past, axis=1)[:, W:], axis=1)
        block = slice(lo - 1, hi - 1)
        return np.stack(
            (
                np.max(np.abs(centered[:, block]), axis=1),
                np.max(np.abs(centered[:, block] + conditional[:, block]), axis=1),
            ),
            axis=1,
        )

    return pool.map_chunks(run_chunk, M)


def stationarity_moments(
    a: CoefficientSeq,
    spec: InnovationSpec,
    lag: int,
    M: int,
    seed: int,
    pool: Optional[ReplicatePool] = None,
) -> Tuple[float, float]:
    """Empirical mean and second moment of f o T^lag under the unconditional law."""
    coeffs = a.as_array()
    # f o T^lag = sum_i a_i e o T^{lag-i}; weights indexed from tau = lag - L
    weights = coeffs[::-1].copy()
    draws = annealed_linear_sums(weights, lag - (len(coeffs) - 1), spec, M, seed, Stream.STATIONARITY, pool)
    return float(np.mean(draws)), float(np.mean(draws * draws))
