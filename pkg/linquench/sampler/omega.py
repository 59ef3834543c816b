"""
Sampling of F_0-atoms.

Each tower is a uniform cyclic phase p_k in {0, ..., h_k - 1}; the shift T
advances every phase by one. Tower events at different times are disjoint
within a tower and every event at a time t <= 0 is F_0-measurable.
"""

import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..counterexample import InnovationSpec
from ..errors import InfeasibleAlignmentError, PreconditionError
from .models import OmegaState
from .streams import Stream, random_signs, rng_for

logger = logging.getLogger(__name__)

MAX_REJECTION_DRAWS = 100_000


def _past_signs(
    spec: InnovationSpec,
    phases: Sequence[int],
    past_window: int,
    rng: np.random.Generator,
) -> Dict[Tuple[int, int], float]:
    signs: Dict[Tuple[int, int], float] = {}
    for k, (p, h) in enumerate(zip(phases, spec.tower_heights), start=1):
        first = -past_window + (past_window - p) % h
        times = list(range(first, 1, h))
        for t, s in zip(times, random_signs(rng, len(times)).tolist()):
            signs[(k, t)] = s
    return signs


def sample_omega(spec: InnovationSpec, seed: int, past_window: int) -> OmegaState:
    """Uniform independent phases and iid past signs, a deterministic function of seed."""
    if past_window < 0:
        raise PreconditionError(f"past_window must be nonnegative, got {past_window}")
    rng = rng_for(seed, Stream.OMEGA)
    phases = tuple(int(rng.integers(0, h)) for h in spec.tower_heights)
    return OmegaState(
        phases=phases,
        tower_heights=spec.tower_heights,
        past_signs=_past_signs(spec, phases, past_window, rng),
        seed=int(seed),
        past_window=past_window,
    )


def force_bad_omega(
    spec: InnovationSpec,
    k: int,
    N: int,
    seed: int,
    past_window: int,
    tower_scales: Optional[Sequence[int]] = None,
) -> OmegaState:
    """
    An F_0-atom where tower k fires at time N - 1 and no other tower does.

    The other phases are rejection-sampled; the number of phase draws is
    kept in `draws`.

    Raises:
        PreconditionError: k out of range, or N outside [N_k, N_{k+1})
        InfeasibleAlignmentError: another tower fires at every time (height 1)
    """
    if not 1 <= k <= spec.K:
        raise PreconditionError(f"tower index {k} outside 1..{spec.K}")
    scales = list(tower_scales) if tower_scales is not None else [h // 4 for h in spec.tower_heights]
    if N < max(scales[k - 1], 1) or (k < spec.K and N >= scales[k]):
        upper = scales[k] if k < spec.K else "inf"
        raise PreconditionError(f"N={N} outside the block [N_{k}={scales[k - 1]}, {upper})")

    others = [j for j in range(1, spec.K + 1) if j != k]
    blocked = [j for j in others if spec.height(j) == 1]
    if blocked:
        raise InfeasibleAlignmentError(f"towers {blocked} have height 1 and fire at every time")

    rng = rng_for(seed, Stream.OMEGA)
    t_forced = N - 1
    phases = [0] * spec.K
    phases[k - 1] = (-t_forced) % spec.height(k)
    draws = 0
    while True:
        draws += 1
        for j in others:
            phases[j - 1] = int(rng.integers(0, spec.height(j)))
        if not any((phases[j - 1] + t_forced) % spec.height(j) == 0 for j in others):
            break
        if draws >= MAX_REJECTION_DRAWS:
            raise InfeasibleAlignmentError(f"no admissible phases after {draws} draws")

    logger.debug(f"[omega] forced tower {k} at t={t_forced} after {draws} draws")
    return OmegaState(
        phases=tuple(phases),
        tower_heights=spec.tower_heights,
        past_signs=_past_signs(spec, phases, past_window, rng),
        seed=int(seed),
        past_window=past_window,
        draws=draws,
    )
