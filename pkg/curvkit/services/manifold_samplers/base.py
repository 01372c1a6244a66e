"""
Common interface of the synthetic manifold samplers
"""

from abc import ABC, abstractmethod
from typing import Callable

import numpy as np

from curvkit.config.constants import ManifoldTag
from curvkit.config.settings import get_settings
from curvkit.exceptions import SamplerError
from curvkit.models.metric import DistanceMatrix
from curvkit.models.sample import LabeledSample


class ManifoldSampler(ABC):
    """Uniform sampler on a manifold with closed-form scalar curvature"""

    tag: ManifoldTag
    dimension: int = 2

    @abstractmethod
    def sample(self, count: int, seed: int = 0) -> LabeledSample:
        """Draw a labeled sample; deterministic given the seed"""

    @property
    @abstractmethod
    def volume(self) -> float:
        """Total volume of the sampled region"""

    def ball_volume(self, r: float) -> float:
        """Volume of a geodesic ball of radius r (away from any boundary)"""
        raise SamplerError(f"{self.tag.value} has no closed-form ball volume")

    @staticmethod
    def _check_count(count: int):
        if count < 2:
            raise SamplerError(f"need at least 2 points, got {count}")

    @staticmethod
    def _exact_matrix(n_points: int, rows: Callable[[np.ndarray], np.ndarray]) -> DistanceMatrix:
        return DistanceMatrix.from_rows(n_points, rows, get_settings().block_size)
