import math

import numpy as np
from scipy.integrate import quad

from curvkit.config.constants import ManifoldTag
from curvkit.exceptions import SamplerError
from curvkit.models.metric import DistanceMatrix, EvaluationSet, PointCloud
from curvkit.models.sample import LabeledSample
from curvkit.utils.geometry import sphere_volume
from curvkit.utils.helpers import make_rng
from curvkit.utils.logger import logger

from .base import ManifoldSampler


class SphereSampler(ManifoldSampler):
    tag = ManifoldTag.SPHERE

    def __init__(self, dimension: int = 2):
        if dimension < 1:
            raise SamplerError(f"sphere dimension must be >= 1, got {dimension}")
        self.dimension = dimension
        self.name = f'S^{dimension}'

    @property
    def volume(self) -> float:
        return sphere_volume(self.dimension)

    @property
    def scalar_curvature(self) -> float:
        return float(self.dimension * (self.dimension - 1))

    def ball_volume(self, r: float) -> float:
        """Cap volume vol(S^(n-1)) * integral_0^r sin^(n-1)(t) dt, r <= pi"""
        n = self.dimension
        r = min(r, math.pi)
        if n == 2:
            return 2.0 * math.pi * (1.0 - math.cos(r))
        integral, _ = quad(lambda t: math.sin(t) ** (n - 1), 0.0, r)
        return sphere_volume(n - 1) * integral

    @staticmethod
    def distance_matrix(points: np.ndarray) -> DistanceMatrix:
        """Great-circle distances arccos(clip(<x, y>, -1, 1))"""
        points = np.asarray(points, dtype=np.float64)

        def rows(block: np.ndarray) -> np.ndarray:
            return np.arccos(np.clip(points[block] @ points.T, -1.0, 1.0))

        return ManifoldSampler._exact_matrix(points.shape[0], rows)

    def sample(self, count: int, seed: int = 0) -> LabeledSample:
        self._check_count(count)
        rng = make_rng(seed)
        draws = rng.standard_normal((count, self.dimension + 1))
        points = draws / np.linalg.norm(draws, axis=1, keepdims=True)

        logger.info(f"✅ Sampled {count} points on {self.name} (seed {seed})")
        return LabeledSample(
            manifold_tag=self.tag,
            dimension=self.dimension,
            cloud=PointCloud(points),
            exact_distances=self.distance_matrix(points),
            true_curvature=np.full(count, self.scalar_curvature),
            true_density=np.full(count, 1.0 / self.volume),
            evaluation_mask=EvaluationSet.all(count),
            parameters={'dimension': self.dimension},
        )
