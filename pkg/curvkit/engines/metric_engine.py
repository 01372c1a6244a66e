"""
Metric engine: distance matrices from point clouds and ball counts
"""

import numpy as np
from scipy.spatial.distance import cdist

from curvkit.config.settings import get_settings
from curvkit.exceptions import MetricValidationError
from curvkit.models.metric import DistanceMatrix, PointCloud
from curvkit.utils.logger import logger


def pairwise_euclidean(cloud: PointCloud, block_size: int = None) -> DistanceMatrix:
    """
    Euclidean distance matrix of an embedded point cloud

    Args:
        cloud: Embedded coordinates
        block_size: Rows per cdist call (defaults to CURVKIT_BLOCK_SIZE)

    Returns:
        DistanceMatrix with d(i, j) = |x_i - x_j|
    """
    if not cloud.embedded:
        raise MetricValidationError("point cloud is a chart, not an embedding; Euclidean distances are meaningless")
    block_size = block_size or get_settings().block_size
    coordinates = cloud.coordinates

    def rows(block: np.ndarray) -> np.ndarray:
        return cdist(coordinates[block], coordinates)

    matrix = DistanceMatrix.from_rows(cloud.n_points, rows, block_size)
    logger.debug(f"Computed Euclidean distances for {cloud.n_points} points")
    return matrix


def ball_count(d: DistanceMatrix, x: int, r: float) -> int:
    """N(x, r): points other than x with d(x, y) <= r (closed ball)"""
    if r < 0:
        raise MetricValidationError(f"radius must be nonnegative, got {r}")
    row = d.row(x)
    return int(np.count_nonzero(row <= r)) - 1
