"""
Helper utility functions
"""

import time
from contextlib import contextmanager
from typing import Dict, Iterator, List, Sequence, TypeVar

import numpy as np

T = TypeVar('T')


def chunk_array(array: Sequence[T], size: int) -> List[Sequence[T]]:
    """
    Split array into chunks

    Args:
        array: Array to chunk
        size: Chunk size

    Returns:
        List of chunks
    """
    return [array[i:i + size] for i in range(0, len(array), size)]


def index_blocks(indices: np.ndarray, size: int) -> List[np.ndarray]:
    """Split an index array into contiguous blocks of at most `size` entries"""
    return chunk_array(np.asarray(indices, dtype=np.int64), size)


def make_rng(seed) -> np.random.Generator:
    """Seeded generator; every sampler and Monte-Carlo check goes through here"""
    return np.random.default_rng(seed)


def format_float(value: float) -> str:
    """Shortest round-trip representation, blank for missing values"""
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ""
    return repr(float(value))


class StageTimer:
    """Wall-clock timer for named pipeline stages"""

    def __init__(self):
        self.stages: Dict[str, float] = {}
        self._started = time.perf_counter()

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.stages[name] = self.stages.get(name, 0.0) + time.perf_counter() - start

    @property
    def total(self) -> float:
        return time.perf_counter() - self._started


def triangle_violations(d_ik: np.ndarray, d_ij: np.ndarray, d_jk: np.ndarray, tolerance: float) -> int:
    """
    Count triangle-inequality violations d(i,k) > d(i,j) + d(j,k)

    Args:
        d_ik, d_ij, d_jk: Distances of the sampled triples
        tolerance: Relative slack, scaled by max(1, largest side)

    Returns:
        Number of violating triples
    """
    rhs = d_ij + d_jk
    scale = np.maximum(1.0, np.maximum(d_ik, rhs))
    return int(np.count_nonzero(d_ik > rhs + tolerance * scale))
