import math

import numpy as np

from curvkit.config.constants import ManifoldTag
from curvkit.exceptions import SamplerError
from curvkit.models.metric import EvaluationSet, PointCloud
from curvkit.models.sample import LabeledSample
from curvkit.utils.helpers import make_rng
from curvkit.utils.logger import logger

from .base import ManifoldSampler


class TorusSampler(ManifoldSampler):
    """Ring torus with tube radius r and center-line radius R, sampled area-uniformly"""

    tag = ManifoldTag.TORUS

    def __init__(self, r: float = 1.0, R: float = 2.0):
        if not 0 < r < R:
            raise SamplerError(f"need 0 < r < R, got r={r}, R={R}")
        self.r = r
        self.R = R
        self.name = f'torus (r={r:g}, R={R:g})'

    @property
    def volume(self) -> float:
        return 4.0 * math.pi ** 2 * self.r * self.R

    def scalar_curvature(self, theta: np.ndarray) -> np.ndarray:
        """S(theta) = 2 cos(theta) / (r (R + r cos(theta)))"""
        cos = np.cos(theta)
        return 2.0 * cos / (self.r * (self.R + self.r * cos))

    def embed(self, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        ring = self.R + self.r * np.cos(theta)
        return np.column_stack([ring * np.cos(phi), ring * np.sin(phi), self.r * np.sin(theta)])

    def sample_angles(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Tube angles with density (R + r cos(theta)) / (2 pi R) by rejection"""
        accepted = []
        total = 0
        while total < count:
            batch = max(2 * (count - total), 64)
            theta = 2.0 * math.pi * rng.random(batch)
            keep = rng.random(batch) < (self.R + self.r * np.cos(theta)) / (self.R + self.r)
            accepted.append(theta[keep])
            total += int(keep.sum())
        return np.concatenate(accepted)[:count]

    def sample(self, count: int, seed: int = 0) -> LabeledSample:
        self._check_count(count)
        rng = make_rng(seed)
        theta = self.sample_angles(count, rng)
        phi = 2.0 * math.pi * rng.random(count)

        logger.info(f"✅ Sampled {count} points on the {self.name} (seed {seed})")
        return LabeledSample(
            manifold_tag=self.tag,
            dimension=2,
            cloud=PointCloud(self.embed(theta, phi)),
            true_curvature=self.scalar_curvature(theta),
            true_density=np.full(count, 1.0 / self.volume),
            evaluation_mask=EvaluationSet.all(count),
            coordinate_name='theta',
            coordinate=theta,
            parameters={'r': self.r, 'R': self.R},
        )
