"""
Intrinsic dimension engine (Levina-Bickel maximum likelihood)
"""

import numpy as np

from curvkit.config.constants import DEFAULT_K1, DEFAULT_K2
from curvkit.config.settings import get_settings
from curvkit.exceptions import MetricValidationError
from curvkit.models.metric import DistanceMatrix
from curvkit.models.stats import DimensionEstimate
from curvkit.utils.helpers import index_blocks
from curvkit.utils.logger import logger


def nearest_neighbor_distances(d: DistanceMatrix, k: int, block_size: int = None) -> np.ndarray:
    """
    Sorted distances to the k nearest neighbors of every point

    Returns:
        Array of shape (N, k); column j-1 holds T_j, the self entry excluded
    """
    if not 1 <= k <= d.n_points - 1:
        raise MetricValidationError(f"k must lie in [1, {d.n_points - 1}], got {k}")
    block_size = block_size or get_settings().block_size
    out = np.empty((d.n_points, k), dtype=np.float64)
    for block in index_blocks(np.arange(d.n_points), block_size):
        rows = d.rows(block)
        rows[np.arange(block.size), block] = np.inf
        rows.sort(axis=1)
        out[block] = rows[:, :k]
    return out


def pointwise_levina_bickel(neighbor_distances: np.ndarray, k: int) -> np.ndarray:
    """
    n_k(x) = [ (1/(k-1)) sum_{j<k} log(T_k / T_j) ]^-1 for each row of T

    Args:
        neighbor_distances: T_1..T_m per row (m >= k), ascending
        k: Neighbor index, k >= 2

    Returns:
        Per-row estimates; inf where every T_j equals T_k
    """
    t = np.atleast_2d(np.asarray(neighbor_distances, dtype=np.float64))
    if k < 2 or k > t.shape[1]:
        raise ValueError(f"k must lie in [2, {t.shape[1]}], got {k}")
    # Ratio form keeps the estimate bit-identical under d -> c d for c a power of two
    logs = np.log(t[:, k - 1:k] / t[:, :k - 1]).sum(axis=1)
    with np.errstate(divide='ignore'):
        return (k - 1) / logs


def levina_bickel(d: DistanceMatrix, k1: int = DEFAULT_K1, k2: int = DEFAULT_K2) -> DimensionEstimate:
    """
    Levina-Bickel dimension estimate averaged over k in [k1, k2]

    Points with a zero neighbor distance (duplicates) are skipped; a point whose
    first k distances are all equal is left out of that k's average.
    """
    if not 2 <= k1 <= k2 <= d.n_points - 1:
        raise MetricValidationError(f"need 2 <= k1 <= k2 <= N-1, got k1={k1}, k2={k2}, N={d.n_points}")

    t = nearest_neighbor_distances(d, k2)
    duplicates = t[:, 0] == 0.0
    if np.any(duplicates):
        logger.warning(f"⚠️ Skipping {int(duplicates.sum())} points with zero neighbor distance in dimension estimate")
    t = t[~duplicates]
    if t.shape[0] == 0:
        raise MetricValidationError("every point has a duplicate; dimension is undefined")

    raw = []
    excluded = 0
    for k in range(k1, k2 + 1):
        estimates = pointwise_levina_bickel(t, k)
        finite = np.isfinite(estimates)
        excluded += int(np.count_nonzero(~finite))
        if not np.any(finite):
            raise MetricValidationError(f"no point yields a finite estimate at k={k}")
        raw.append(float(np.mean(estimates[finite])))
    if excluded:
        logger.warning(f"⚠️ Excluded {excluded} (point, k) estimates with tied neighbor distances")

    estimate = DimensionEstimate.from_raw(raw, k1, k2, skipped_points=int(duplicates.sum()))
    logger.info(f"✅ Intrinsic dimension n_hat={estimate.n_hat} (mean {estimate.mean:.3f}, k in [{k1}, {k2}])")
    return estimate
