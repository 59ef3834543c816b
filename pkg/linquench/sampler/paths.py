"""
Innovations and exact path sums.

The innovation at time t is sum_k w_k xi_{k,t} 1[(p_k + t) mod h_k = 0].
Signs at t <= 0 come from the F_0-atom, signs at t >= 1 from a SignStream.
The path sums are an FIR filter of the dense innovation window followed
by a prefix sum; the brute-force oracles evaluate the defining double sums
literally and exist for testing.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import signal

from ..counterexample import InnovationSpec
from ..errors import PreconditionError
from ..process import CoefficientSeq, partial_sums
from .models import OmegaState, PathSample
from .streams import SignStream

logger = logging.getLogger(__name__)


def tower_events(phases: np.ndarray, h: int, lo: int, hi: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Firing times of one tower in [lo, hi] for a batch of phases.

    Returns:
        (rows, times): replicate index and time of every event, in row-major
        order and increasing time within a row
    """
    phases = np.asarray(phases, dtype=np.int64)
    first = lo + np.mod(-phases - lo, h)
    count = np.where(first <= hi, (hi - first) // h + 1, 0)
    width = int(count.max()) if len(count) else 0
    offsets = np.arange(width, dtype=np.int64)
    times = first[:, None] + h * offsets[None, :]
    mask = offsets[None, :] < count[:, None]
    rows = np.broadcast_to(np.arange(len(phases))[:, None], times.shape)
    return rows[mask], times[mask]


def _first_future_time(p: int, h: int) -> int:
    return 1 + (-p - 1) % h


def innovation_at(
    omega: OmegaState,
    t: int,
    spec: InnovationSpec,
    future_signs: SignStream,
) -> float:
    """e o T^t evaluated atom by atom."""
    if t < -omega.past_window:
        raise PreconditionError(f"t={t} is before the past window -{omega.past_window}")
    total = 0.0
    for k in omega.aligned_towers(t):
        if t <= 0:
            sign = omega.past_signs[(k, t)]
        else:
            h = spec.height(k)
            r = (t - _first_future_time(omega.phases[k - 1], h)) // h
            sign = future_signs.sign(k, r)
        total += spec.weight(k) * sign
    return total


def past_atoms(omega: OmegaState, spec: InnovationSpec) -> Tuple[np.ndarray, np.ndarray]:
    """(times, values) of every nonzero innovation term at -past_window <= t <= 0."""
    times, values = [], []
    for (k, t), sign in omega.past_signs.items():
        times.append(t)
        values.append(spec.weight(k) * sign)
    return np.asarray(times, dtype=np.int64), np.asarray(values, dtype=np.float64)


def innovation_window(
    omega: OmegaState,
    spec: InnovationSpec,
    N: int,
    future_signs: SignStream,
) -> Tuple[np.ndarray, int]:
    """Dense innovations over t = -past_window..N-1 and the number of atoms in it."""
    W = omega.past_window
    e = np.zeros(W + N, dtype=np.float64)
    used = 0
    for k in range(1, spec.K + 1):
        _, times = tower_events(np.array([omega.phases[k - 1]]), spec.height(k), -W, N - 1)
        past = times[times <= 0]
        future = times[times >= 1]
        if len(past):
            signs = np.array([omega.past_signs[(k, int(t))] for t in past])
            np.add.at(e, past + W, spec.weight(k) * signs)
        if len(future):
            np.add.at(e, future + W, spec.weight(k) * future_signs.signs(k, len(future)))
        used += len(times)
    return e, used


def path_sum(
    a: CoefficientSeq,
    omega: OmegaState,
    N: int,
    spec: InnovationSpec,
    seed: Optional[int] = None,
    future_signs: Optional[SignStream] = None,
) -> PathSample:
    """
    S_1..S_N along one realization, plus E(S_N | F_0).

    Future signs come from `future_signs` when given, else from a fresh
    SignStream seeded with `seed`.
    """
    if N < 1:
        raise PreconditionError(f"path_sum needs N >= 1, got {N}")
    W = omega.past_window
    if W < a.support_length:
        raise PreconditionError(f"past window {W} shorter than the support length {a.support_length}")
    signs = future_signs if future_signs is not None else SignStream(seed if seed is not None else omega.seed)

    e, used = innovation_window(omega, spec, N, signs)
    f = signal.lfilter(a.as_array(), [1.0], e)[W:]
    s = np.cumsum(f)

    b = partial_sums(a, N + W)
    times, values = past_atoms(omega, spec)
    cond_exp = float(np.dot(b[N - times] - b[-times], values)) if len(times) else 0.0
    return PathSample(s=s, cond_exp=cond_exp, innovations_used=used)


def brute_force_path(
    a: CoefficientSeq,
    omega: OmegaState,
    N: int,
    spec: InnovationSpec,
    future_signs: SignStream,
) -> np.ndarray:
    """S_1..S_N from f o T^j = sum_i a_i e o T^{j-i}, term by term."""
    values = list(a.values) or [0.0]
    s, running = [], 0.0
    for j in range(N):
        f_j = 0.0
        for i, a_i in enumerate(values):
            if a_i != 0.0:
                f_j += a_i * innovation_at(omega, j - i, spec, future_signs)
        running += f_j
        s.append(running)
    return np.asarray(s)


def brute_force_variance(a: CoefficientSeq, n: int) -> float:
    """Var(S_n) = sum_u (sum_{j<n} a_{j-u})^2 for a unit-variance uncorrelated innovation."""
    values = list(a.values) or [0.0]
    L = len(values) - 1
    total = 0.0
    for u in range(-L, n):
        c = 0.0
        for j in range(n):
            i = j - u
            if 0 <= i <= L:
                c += values[i]
        total += c * c
    return total
