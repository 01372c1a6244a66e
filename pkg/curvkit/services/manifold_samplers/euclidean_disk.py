import math

import numpy as np
from scipy.spatial.distance import cdist

from curvkit.config.constants import ManifoldTag
from curvkit.models.metric import DistanceMatrix, EvaluationSet, PointCloud
from curvkit.models.sample import LabeledSample
from curvkit.utils.helpers import make_rng
from curvkit.utils.logger import logger

from .base import ManifoldSampler


class EuclideanDiskSampler(ManifoldSampler):
    tag = ManifoldTag.EUCLIDEAN_DISK

    def __init__(self, radius: float = 2.0, evaluation_radius: float = 1.0):
        self.radius = radius
        self.evaluation_radius = evaluation_radius
        self.name = f'Euclidean disk (radius {radius:g})'

    @property
    def volume(self) -> float:
        return math.pi * self.radius ** 2

    def ball_volume(self, r: float) -> float:
        return math.pi * r ** 2

    @staticmethod
    def distance_matrix(points: np.ndarray) -> DistanceMatrix:
        points = np.asarray(points, dtype=np.float64)
        return ManifoldSampler._exact_matrix(points.shape[0], lambda block: cdist(points[block], points))

    def sample(self, count: int, seed: int = 0) -> LabeledSample:
        self._check_count(count)
        rng = make_rng(seed)
        radial = self.radius * np.sqrt(rng.random(count))
        angle = 2.0 * math.pi * rng.random(count)
        points = np.column_stack([radial * np.cos(angle), radial * np.sin(angle)])
        norms = np.linalg.norm(points, axis=1)

        logger.info(f"✅ Sampled {count} points on the {self.name} (seed {seed})")
        return LabeledSample(
            manifold_tag=self.tag,
            dimension=2,
            cloud=PointCloud(points),
            exact_distances=self.distance_matrix(points),
            true_curvature=np.zeros(count),
            true_density=np.full(count, 1.0 / self.volume),
            evaluation_mask=EvaluationSet.from_mask(norms <= self.evaluation_radius),
            coordinate_name='radius',
            coordinate=norms,
            parameters={'radius': self.radius, 'evaluation_radius': self.evaluation_radius},
        )
