"""
Labeled synthetic samples with ground-truth curvature and density
"""

from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from curvkit.config.constants import ManifoldTag
from curvkit.models.metric import DistanceMatrix, EvaluationSet, PointCloud


class NoiseSpec(BaseModel):
    """Isotropic Gaussian noise added to ambient coordinates"""

    sigma: float = Field(..., ge=0.0)
    seed: int = 0


class LabeledSample(BaseModel):
    """Point cloud sampled from a known manifold, with exact labels for scoring"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    manifold_tag: ManifoldTag
    dimension: int = Field(..., ge=1)
    cloud: PointCloud
    exact_distances: Optional[DistanceMatrix] = None
    true_curvature: np.ndarray
    true_density: np.ndarray
    evaluation_mask: EvaluationSet
    # Intrinsic coordinate used for curvature profiles (torus angle, hyperboloid height, ...)
    coordinate_name: Optional[str] = None
    coordinate: Optional[np.ndarray] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)
    noise: Optional[NoiseSpec] = None

    @model_validator(mode='after')
    def _check_labels(self) -> 'LabeledSample':
        n = self.cloud.n_points
        if self.true_curvature.shape != (n,) or self.true_density.shape != (n,):
            raise ValueError("labels must have one entry per point")
        if not np.all(np.isfinite(self.true_curvature)):
            raise ValueError("true curvature must be finite")
        if not np.all(self.true_density > 0):
            raise ValueError("true density must be positive")
        if self.exact_distances is not None and self.exact_distances.n_points != n:
            raise ValueError("exact distances do not match the cloud size")
        return self

    @property
    def n_points(self) -> int:
        return self.cloud.n_points
