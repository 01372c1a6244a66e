"""
Finite metric space data model: distance matrices, point clouds, evaluation sets
"""

from typing import Callable, Iterable, Optional

import numpy as np

from curvkit.config.constants import (
    ASYMMETRY_TOLERANCE,
    DIAGONAL_TOLERANCE,
    TRIANGLE_TOLERANCE,
)
from curvkit.exceptions import MetricValidationError
from curvkit.utils.helpers import index_blocks, triangle_violations
from curvkit.utils.logger import logger


def _row_offsets(n: int) -> np.ndarray:
    """Start of row i in lower-triangle row-major storage: i(i-1)/2"""
    i = np.arange(n, dtype=np.int64)
    return i * (i - 1) // 2


class DistanceMatrix:
    """
    Symmetric N x N distance matrix stored as its strict lower triangle.

    Entries are kept row-major: (1,0), (2,0), (2,1), (3,0), ... so d(i, j) for
    i > j lives at i(i-1)/2 + j. The diagonal is implicitly zero. Instances are
    read-only after construction.
    """

    def __init__(self, n_points: int, entries: np.ndarray):
        if n_points < 2:
            raise MetricValidationError(f"distance matrix needs N >= 2 points, got {n_points}")
        entries = np.array(entries, dtype=np.float64, copy=True).ravel()
        expected = n_points * (n_points - 1) // 2
        if entries.size != expected:
            raise MetricValidationError(
                f"expected {expected} lower-triangle entries for N={n_points}, got {entries.size}"
            )
        if not np.all(np.isfinite(entries)):
            raise MetricValidationError("distance matrix contains non-finite entries")
        if np.any(entries < 0):
            raise MetricValidationError(f"negative distance {entries.min()!r}")

        entries.setflags(write=False)
        self.n_points = int(n_points)
        self.entries = entries
        self._offsets = _row_offsets(self.n_points)

        duplicates = int(np.count_nonzero(entries == 0.0))
        if duplicates:
            logger.warning(f"⚠️ {duplicates} zero off-diagonal distances (duplicate points)")

    # Construction

    @classmethod
    def from_square(cls, square: np.ndarray, source: str = "matrix") -> "DistanceMatrix":
        """
        Validate a full square matrix and convert it to triangular storage

        Args:
            square: N x N array
            source: Label used in warnings and errors

        Returns:
            Validated DistanceMatrix; mild asymmetry is repaired by averaging
        """
        square = np.asarray(square, dtype=np.float64)
        if square.ndim != 2 or square.shape[0] != square.shape[1]:
            raise MetricValidationError(f"{source}: expected a square matrix, got shape {square.shape}")
        n = square.shape[0]
        if n < 2:
            raise MetricValidationError(f"{source}: need N >= 2 points, got {n}")
        if not np.all(np.isfinite(square)):
            raise MetricValidationError(f"{source}: non-finite entries")
        if np.any(square < 0):
            raise MetricValidationError(f"{source}: negative entry {square.min()!r}")
        diagonal = np.abs(np.diag(square))
        if np.any(diagonal > DIAGONAL_TOLERANCE):
            raise MetricValidationError(
                f"{source}: nonzero diagonal entry {diagonal.max()!r} at index {int(diagonal.argmax())}"
            )

        asymmetry = float(np.max(np.abs(square - square.T)))
        scale = float(np.max(square))
        if asymmetry > ASYMMETRY_TOLERANCE * scale:
            logger.warning(f"⚠️ {source}: max asymmetry {asymmetry:.3g} exceeds tolerance; symmetrizing")
        symmetric = (square + square.T) / 2.0
        lower = np.tril_indices(n, -1)
        return cls(n, symmetric[lower])

    @classmethod
    def from_rows(
        cls,
        n_points: int,
        row_fn: Callable[[np.ndarray], np.ndarray],
        block_size: int = 512,
    ) -> "DistanceMatrix":
        """
        Build from a function returning full distance rows for a block of indices.
        Only the lower-triangle part of each row is kept.
        """
        entries = np.empty(n_points * (n_points - 1) // 2, dtype=np.float64)
        offsets = _row_offsets(n_points)
        for block in index_blocks(np.arange(n_points), block_size):
            rows = np.asarray(row_fn(block), dtype=np.float64)
            for local, i in enumerate(block):
                if i > 0:
                    entries[offsets[i]:offsets[i] + i] = rows[local, :i]
        return cls(n_points, entries)

    # Access

    def _check_index(self, i: int) -> int:
        if not 0 <= int(i) < self.n_points:
            raise MetricValidationError(f"index {i} out of range for N={self.n_points}")
        return int(i)

    def __getitem__(self, pair) -> float:
        i, j = (self._check_index(k) for k in pair)
        if i == j:
            return 0.0
        hi, lo = max(i, j), min(i, j)
        return float(self.entries[self._offsets[hi] + lo])

    def pair_values(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Vectorized d(i, j) for index arrays"""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        hi = np.maximum(i, j)
        lo = np.minimum(i, j)
        flat = np.where(hi == lo, 0, self._offsets[hi] + lo)
        values = self.entries[flat]
        return np.where(hi == lo, 0.0, values)

    def rows(self, indices: Iterable[int]) -> np.ndarray:
        """Full distance rows for the given indices, shape (len(indices), N)"""
        indices = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices,
                             dtype=np.int64)
        if indices.size and (indices.min() < 0 or indices.max() >= self.n_points):
            raise MetricValidationError(f"row index out of range for N={self.n_points}")
        columns = np.arange(self.n_points, dtype=np.int64)
        return self.pair_values(indices[:, None], columns[None, :])

    def row(self, i: int) -> np.ndarray:
        """Full distance row of point i (self entry 0)"""
        return self.rows([self._check_index(i)])[0]

    def sorted_row(self, i: int) -> tuple:
        """
        Distances from i to every other point in ascending order

        Returns:
            (distances, indices) with the self entry removed; ties ordered by index
        """
        row = self.row(i)
        order = np.argsort(row, kind='stable')
        order = order[order != i]
        return row[order], order

    def to_square(self) -> np.ndarray:
        """Dense symmetric copy, O(N^2) memory"""
        square = np.zeros((self.n_points, self.n_points), dtype=np.float64)
        lower = np.tril_indices(self.n_points, -1)
        square[lower] = self.entries
        square[(lower[1], lower[0])] = self.entries
        return square

    def scaled(self, factor: float) -> "DistanceMatrix":
        """Copy with every distance multiplied by factor"""
        return DistanceMatrix(self.n_points, self.entries * factor)

    @property
    def max_distance(self) -> float:
        return float(self.entries.max())

    # Validation

    def check_triangle(
        self,
        samples: int = 10000,
        rng: Optional[np.random.Generator] = None,
        tolerance: float = TRIANGLE_TOLERANCE,
    ) -> int:
        """
        Strict-mode check of the triangle inequality on random triples

        Returns:
            Number of violating triples (0 for a metric)
        """
        rng = rng if rng is not None else np.random.default_rng(0)
        triples = rng.integers(0, self.n_points, size=(samples, 3))
        violations = triangle_violations(
            self.pair_values(triples[:, 0], triples[:, 2]),
            self.pair_values(triples[:, 0], triples[:, 1]),
            self.pair_values(triples[:, 1], triples[:, 2]),
            tolerance,
        )
        if violations:
            logger.warning(f"⚠️ {violations}/{samples} sampled triples violate the triangle inequality")
        return violations

    def __eq__(self, other) -> bool:
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return self.n_points == other.n_points and np.array_equal(self.entries, other.entries)

    def __repr__(self) -> str:
        return f"DistanceMatrix(n_points={self.n_points})"


class PointCloud:
    """N x D coordinates; `embedded` is False for coordinates that are only a chart"""

    def __init__(self, coordinates: np.ndarray, embedded: bool = True):
        coordinates = np.array(coordinates, dtype=np.float64, copy=True)
        if coordinates.ndim == 1:
            coordinates = coordinates[:, None]
        if coordinates.ndim != 2 or coordinates.shape[1] < 1:
            raise MetricValidationError(f"point cloud must be N x D with D >= 1, got {coordinates.shape}")
        if not np.all(np.isfinite(coordinates)):
            raise MetricValidationError("point cloud contains non-finite coordinates")
        coordinates.setflags(write=False)
        self.coordinates = coordinates
        self.embedded = embedded

    @property
    def n_points(self) -> int:
        return self.coordinates.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.coordinates.shape[1]

    def __repr__(self) -> str:
        return f"PointCloud(n_points={self.n_points}, ambient_dim={self.ambient_dim}, embedded={self.embedded})"


class EvaluationSet:
    """Distinct, sorted point indices at which curvature is reported"""

    def __init__(self, indices: Iterable[int], n_points: Optional[int] = None):
        indices = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices,
                             dtype=np.int64)
        if np.unique(indices).size != indices.size:
            raise MetricValidationError("evaluation indices must be distinct")
        if indices.size and indices.min() < 0:
            raise MetricValidationError("evaluation indices must be nonnegative")
        if n_points is not None and indices.size and indices.max() >= n_points:
            raise MetricValidationError(f"evaluation index {int(indices.max())} out of range for N={n_points}")
        self.indices = np.sort(indices)
        self.indices.setflags(write=False)

    @classmethod
    def all(cls, n_points: int) -> "EvaluationSet":
        return cls(np.arange(n_points), n_points)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "EvaluationSet":
        mask = np.asarray(mask, dtype=bool)
        return cls(np.flatnonzero(mask), mask.size)

    def mask(self, n_points: int) -> np.ndarray:
        out = np.zeros(n_points, dtype=bool)
        out[self.indices] = True
        return out

    def __len__(self) -> int:
        return int(self.indices.size)

    def __iter__(self):
        return iter(int(i) for i in self.indices)

    def __repr__(self) -> str:
        return f"EvaluationSet(size={len(self)})"
