"""
Random streams derived from one root seed.

Every consumer draws from numpy's SeedSequence with a spawn key
(stream tag, ...), so streams never overlap and do not depend on call
order or thread placement.
"""

from enum import IntEnum
from typing import Dict, Optional

import numpy as np


class Stream(IntEnum):
    OMEGA = 1
    FUTURE = 2
    REPLICATE = 3
    ANNEALED = 4
    BLOCK = 5
    ORBIT = 6
    STATIONARITY = 7


def seed_sequence(root: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(root), spawn_key=tuple(int(k) for k in key))


def rng_for(root: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(root, *key))


def derive_seed(root: int, *key: int) -> int:
    """A 63-bit child seed for (root, key)."""
    state = seed_sequence(root, *key).generate_state(1, dtype=np.uint64)[0]
    return int(state) >> 1


def random_signs(rng: np.random.Generator, shape) -> np.ndarray:
    """Independent fair +-1 signs as float64.

    Built from uniform doubles (one 64-bit draw each), so drawing n then m
    values gives the same sequence as drawing n + m at once.
    """
    return np.where(rng.random(shape) < 0.5, -1.0, 1.0)


class SignStream:
    """
    Future signs xi_{k,r} for the r-th event (r = 0, 1, ...) of tower k at times t >= 1.

    Streams are extended lazily and are prefix-stable: asking for more
    signs never changes the ones already handed out.
    """

    def __init__(self, seed: Optional[int] = None, constant: Optional[float] = None):
        if seed is None and constant is None:
            raise ValueError("SignStream needs a seed or a constant sign")
        self.seed = seed
        self._constant = constant
        self._buffers: Dict[int, np.ndarray] = {}
        self._rngs: Dict[int, np.random.Generator] = {}

    @classmethod
    def constant(cls, value: float = 1.0) -> "SignStream":
        return cls(constant=float(value))

    def signs(self, k: int, count: int) -> np.ndarray:
        if count <= 0:
            return np.zeros(0)
        if self._constant is not None:
            return np.full(count, self._constant)
        buf = self._buffers.get(k, np.zeros(0))
        if len(buf) < count:
            rng = self._rngs.setdefault(k, rng_for(self.seed, Stream.FUTURE, k))
            extra = random_signs(rng, max(count - len(buf), len(buf)))
            buf = np.concatenate((buf, extra))
            self._buffers[k] = buf
        return buf[:count]

    def sign(self, k: int, r: int) -> float:
        return float(self.signs(k, r + 1)[r])
