"""
Density engine: manifold kernel density estimates and in-ball density averages
"""

import math
from typing import Optional

import numpy as np

from curvkit.config.constants import DistanceSource, KernelType
from curvkit.config.settings import get_settings
from curvkit.exceptions import DensityError
from curvkit.models.metric import DistanceMatrix
from curvkit.models.stats import DensityField
from curvkit.utils.geometry import unit_ball_volume
from curvkit.utils.helpers import index_blocks
from curvkit.utils.logger import logger


def _gaussian(u: np.ndarray) -> np.ndarray:
    return np.exp(-0.5 * u * u)


def _biweight(u: np.ndarray) -> np.ndarray:
    return np.where(u <= 1.0, (1.0 - u * u) ** 2, 0.0)


def kernel_constant(kernel: KernelType, n: int) -> float:
    """Normalizer c_K making c_K K(|u|) integrate to 1 over R^n"""
    kernel = KernelType(kernel)
    if kernel == KernelType.GAUSSIAN:
        return (2.0 * math.pi) ** (-0.5 * n)
    if kernel == KernelType.BIWEIGHT:
        return (n + 2) * (n + 4) / (8.0 * unit_ball_volume(n))
    raise ValueError(f"kernel '{kernel.value}' has no normalizing constant")


class KernelDensityEstimator:
    """
    Kernel density estimator on a finite metric space

    rho(x) = (1 / (N h^n)) sum_z c_K K(d(x, z) / h), the sum running over all
    points including x itself. With leave_one_out the self term is dropped and
    the sum is divided by N - 1 instead.
    """

    def __init__(self, kernel: KernelType, n_hat: int, bandwidth: float, block_size: Optional[int] = None,
                 leave_one_out: bool = False):
        if bandwidth <= 0:
            raise DensityError(f"bandwidth must be positive, got {bandwidth}")
        if n_hat < 1:
            raise DensityError(f"dimension must be >= 1, got {n_hat}")
        self.kernel = KernelType(kernel)
        self.n_hat = n_hat
        self.bandwidth = float(bandwidth)
        self.leave_one_out = leave_one_out
        self.block_size = block_size or get_settings().block_size
        self.constant = kernel_constant(self.kernel, n_hat)
        self.profile = self._initialize_profile()

    def _initialize_profile(self):
        profiles = {
            KernelType.GAUSSIAN: _gaussian,
            KernelType.BIWEIGHT: _biweight,
        }
        return profiles[self.kernel]

    def density_at(self, rows: np.ndarray, centers: Optional[np.ndarray] = None) -> np.ndarray:
        """
        Density at the points whose full distance rows (self entry included) are given

        centers holds the column of each row's own point; it is required for
        leave-one-out estimates.
        """
        rows = np.array(rows, dtype=np.float64, ndmin=2)
        count = rows.shape[1]
        if self.leave_one_out:
            if centers is None:
                raise ValueError("leave-one-out densities need the center column of each row")
            rows[np.arange(rows.shape[0]), centers] = np.inf
            count -= 1
        sums = self.profile(rows / self.bandwidth).sum(axis=1)
        return self.constant * sums / (count * self.bandwidth ** self.n_hat)

    def evaluate(self, d: DistanceMatrix, distance_source: Optional[DistanceSource] = None) -> DensityField:
        values = np.empty(d.n_points, dtype=np.float64)
        for block in index_blocks(np.arange(d.n_points), self.block_size):
            values[block] = self.density_at(d.rows(block), centers=block)

        empty = np.flatnonzero(values <= 0)
        if empty.size:
            raise DensityError(
                f"zero density at {empty.size} points (first: {int(empty[0])}); "
                f"bandwidth {self.bandwidth:g} is too small for the {self.kernel.value} kernel, try a larger one"
            )
        return DensityField(
            values=values,
            kernel=self.kernel,
            bandwidth=self.bandwidth,
            distance_source=distance_source,
            dimension=self.n_hat,
            leave_one_out=self.leave_one_out,
        )


def kde_density(
    d: DistanceMatrix,
    n_hat: int,
    kernel: KernelType = KernelType.GAUSSIAN,
    bandwidth: Optional[float] = None,
    distance_source: Optional[DistanceSource] = None,
    leave_one_out: bool = False,
) -> DensityField:
    """
    Per-point density estimate

    Args:
        d: Distances fed to the kernel (geodesic or Euclidean)
        n_hat: Intrinsic dimension used for normalization
        kernel: gaussian or biweight
        bandwidth: h; default_bandwidth(d) when omitted
        distance_source: Recorded on the field
        leave_one_out: Drop each point's own kernel term

    Returns:
        DensityField with strictly positive values
    """
    h = default_bandwidth(d, n_hat) if bandwidth is None else bandwidth
    field = KernelDensityEstimator(kernel, n_hat, h, leave_one_out=leave_one_out).evaluate(d, distance_source)
    variant = " (leave-one-out)" if leave_one_out else ""
    logger.info(f"✅ {field.kernel.value} KDE{variant}: h={h:.4g}, mean density {field.values.mean():.4g}")
    return field


def default_bandwidth(d: DistanceMatrix, n_hat: Optional[int] = None) -> float:
    """Mean distance to the ceil(sqrt(N))-th nearest neighbor (at most N-1)"""
    n = d.n_points
    m = min(math.ceil(math.sqrt(n)), n - 1)
    block_size = get_settings().block_size
    total = 0.0
    for block in index_blocks(np.arange(n), block_size):
        rows = d.rows(block)
        rows[np.arange(block.size), block] = np.inf
        total += float(np.partition(rows, m - 1, axis=1)[:, m - 1].sum())
    h = total / n
    if h <= 0:
        raise DensityError("default bandwidth is zero; the data are all duplicates")
    return h


def _ball_members(d: DistanceMatrix, x: int, r: float) -> np.ndarray:
    row = d.row(x)
    inside = row <= r
    inside[x] = False
    return np.flatnonzero(inside)


def mean_ball_density(field: DensityField, d: DistanceMatrix, x: int, r: float) -> float:
    """Harmonic mean of rho over the ball (x excluded); rho(x) for an empty ball"""
    members = _ball_members(d, x, r)
    if members.size == 0:
        return float(field.values[x])
    return float(members.size / np.sum(1.0 / field.values[members]))


def arithmetic_ball_density(field: DensityField, d: DistanceMatrix, x: int, r: float) -> float:
    """Sample mean of rho over the ball; never below the harmonic mean"""
    members = _ball_members(d, x, r)
    if members.size == 0:
        return float(field.values[x])
    return float(np.mean(field.values[members]))
