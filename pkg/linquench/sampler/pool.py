"""
Replicate pool for linquench Monte Carlo kernels.

Replicates are cut into fixed-size chunks; chunk c always draws from its
own stream (root seed, stream tag, c), so the numbers do not depend on how
many threads run the chunks. Provides:
- Chunk planning for a replicate count
- Thread-pool execution with results merged in chunk order
- Run statistics for logging
"""

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import psutil

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 256

ChunkFn = Callable[[int, int, int], np.ndarray]


def default_thread_count() -> int:
    return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1


class PoolState(str, Enum):
    """Replicate pool state."""
    IDLE = "idle"
    RUNNING = "running"
    STOPPED = "stopped"


@dataclass
class PoolStats:
    """Statistics for a replicate pool."""
    chunks_run: int = 0
    replicates: int = 0
    busy_seconds: float = 0.0

    @property
    def replicates_per_second(self) -> float:
        if self.busy_seconds <= 0:
            return 0.0
        return self.replicates / self.busy_seconds


class ReplicatePool:
    """
    Runs replicate chunks on a thread pool.

    `fn(chunk, start, count)` must return an array whose first axis has
    length `count`; map_chunks concatenates the results in chunk order.
    """

    def __init__(self, threads: Optional[int] = None, chunk_size: int = DEFAULT_CHUNK_SIZE):
        if chunk_size < 1:
            raise ValueError(f"chunk_size must be positive, got {chunk_size}")
        self.threads = max(1, threads or default_thread_count())
        self.chunk_size = chunk_size
        self.state = PoolState.IDLE
        self.stats = PoolStats()
        self._executor: Optional[ThreadPoolExecutor] = None
        self._lock = threading.Lock()

    def chunk_bounds(self, total: int) -> List[Tuple[int, int, int]]:
        """(chunk index, first replicate, replicate count) for every chunk."""
        return [
            (chunk, start, min(self.chunk_size, total - start))
            for chunk, start in enumerate(range(0, total, self.chunk_size))
        ]

    def map_chunks(self, fn: ChunkFn, total: int) -> np.ndarray:
        """Run fn over all chunks of `total` replicates and merge in chunk order."""
        if total < 1:
            raise ValueError(f"need at least one replicate, got {total}")
        bounds = self.chunk_bounds(total)
        started = time.perf_counter()

        if self.threads == 1 or len(bounds) == 1:
            results = [fn(*b) for b in bounds]
        else:
            if self._executor is None:
                self._executor = ThreadPoolExecutor(max_workers=self.threads, thread_name_prefix="linquench")
            self.state = PoolState.RUNNING
            results = list(self._executor.map(lambda b: fn(*b), bounds))
            self.state = PoolState.IDLE

        with self._lock:
            self.stats.chunks_run += len(bounds)
            self.stats.replicates += total
            self.stats.busy_seconds += time.perf_counter() - started
        logger.debug(f"[pool] {total} replicates in {len(bounds)} chunks on {self.threads} threads")
        return np.concatenate(results, axis=0)

    def shutdown(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None
        self.state = PoolState.STOPPED

    def get_stats(self) -> Dict[str, Any]:
        """Get pool statistics."""
        return {
            "threads": self.threads,
            "chunk_size": self.chunk_size,
            "state": self.state.value,
            "chunks_run": self.stats.chunks_run,
            "replicates": self.stats.replicates,
            "busy_seconds": round(self.stats.busy_seconds, 3),
            "replicates_per_second": round(self.stats.replicates_per_second, 1),
        }


# Global replicate pool instance
_replicate_pool: Optional[ReplicatePool] = None


def get_replicate_pool() -> ReplicatePool:
    """Get the global replicate pool instance."""
    global _replicate_pool
    if _replicate_pool is None:
        _replicate_pool = ReplicatePool()
    return _replicate_pool


def init_replicate_pool(threads: Optional[int] = None, chunk_size: int = DEFAULT_CHUNK_SIZE) -> ReplicatePool:
    """Replace the global pool with one of the given shape."""
    global _replicate_pool
    if _replicate_pool is not None:
        _replicate_pool.shutdown()
    _replicate_pool = ReplicatePool(threads, chunk_size)
    return _replicate_pool


def shutdown_replicate_pool() -> None:
    """Shutdown the global replicate pool."""
    global _replicate_pool
    if _replicate_pool:
        _replicate_pool.shutdown()
        _replicate_pool = None
