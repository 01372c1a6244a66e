import math

import numpy as np

from curvkit.config.constants import ManifoldTag
from curvkit.models.metric import DistanceMatrix, EvaluationSet, PointCloud
from curvkit.models.sample import LabeledSample
from curvkit.utils.helpers import make_rng
from curvkit.utils.logger import logger

from .base import ManifoldSampler


class PoincareDiskSampler(ManifoldSampler):
    """
    Hyperbolic disk of curvature -1 in the Poincare unit-disk model.

    Coordinates are chart coordinates only, so the cloud is marked as not
    embedded and only exact geodesics are available.
    """

    tag = ManifoldTag.POINCARE_DISK

    def __init__(self, hyperbolic_radius: float = 2.0, evaluation_radius: float = 1.0):
        self.hyperbolic_radius = hyperbolic_radius
        self.evaluation_radius = evaluation_radius
        self.name = f'Poincare disk (hyperbolic radius {hyperbolic_radius:g})'

    @property
    def volume(self) -> float:
        return self.ball_volume(self.hyperbolic_radius)

    def ball_volume(self, r: float) -> float:
        return 2.0 * math.pi * (math.cosh(r) - 1.0)

    @staticmethod
    def distance(u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """
        arccosh(1 + 2|u - v|^2 / ((1 - |u|^2)(1 - |v|^2))), evaluated as the
        equivalent 2 asinh(|u - v| / sqrt((1 - |u|^2)(1 - |v|^2)))
        """
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        gap = np.linalg.norm(u - v, axis=-1)
        scale = (1.0 - np.sum(u * u, axis=-1)) * (1.0 - np.sum(v * v, axis=-1))
        return 2.0 * np.arcsinh(gap / np.sqrt(scale))

    @staticmethod
    def distance_matrix(points: np.ndarray) -> DistanceMatrix:
        points = np.asarray(points, dtype=np.float64)

        def rows(block: np.ndarray) -> np.ndarray:
            return PoincareDiskSampler.distance(points[block, None, :], points[None, :, :])

        return ManifoldSampler._exact_matrix(points.shape[0], rows)

    def sample(self, count: int, seed: int = 0) -> LabeledSample:
        self._check_count(count)
        rng = make_rng(seed)
        # Inverse CDF of the radial law sinh(t) / (cosh(R) - 1) on [0, R]
        radial = np.arccosh(1.0 + rng.random(count) * (math.cosh(self.hyperbolic_radius) - 1.0))
        angle = 2.0 * math.pi * rng.random(count)
        chart = np.tanh(radial / 2.0)
        points = np.column_stack([chart * np.cos(angle), chart * np.sin(angle)])

        logger.info(f"✅ Sampled {count} points on the {self.name} (seed {seed})")
        return LabeledSample(
            manifold_tag=self.tag,
            dimension=2,
            cloud=PointCloud(points, embedded=False),
            exact_distances=self.distance_matrix(points),
            true_curvature=np.full(count, -2.0),
            true_density=np.full(count, 1.0 / self.volume),
            evaluation_mask=EvaluationSet.from_mask(radial <= self.evaluation_radius),
            coordinate_name='hyperbolic_radius',
            coordinate=radial,
            parameters={'hyperbolic_radius': self.hyperbolic_radius, 'evaluation_radius': self.evaluation_radius},
        )
