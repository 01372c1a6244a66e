"""
Intrinsic dimension and density models
"""

import math
from typing import Dict, Iterable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from curvkit.config.constants import DistanceSource, KernelType


def _nearest_integer(value: float) -> int:
    return max(1, int(math.floor(value + 0.5)))


class DimensionEstimate(BaseModel):
    """Levina-Bickel estimate; raw_values[i] is the mean estimate for k = k1 + i"""

    n_hat: int = Field(..., ge=1)
    raw_values: List[float]
    k1: int = Field(..., ge=2)
    k2: int = Field(..., ge=2)
    skipped_points: int = 0

    @model_validator(mode='after')
    def _check_rounding(self) -> 'DimensionEstimate':
        if len(self.raw_values) != self.k2 - self.k1 + 1:
            raise ValueError("raw_values must hold one entry per k in [k1, k2]")
        if self.n_hat != _nearest_integer(float(np.mean(self.raw_values))):
            raise ValueError("n_hat must be the nearest integer to the mean of raw_values")
        return self

    @classmethod
    def from_raw(cls, raw_values: Iterable[float], k1: int, k2: int, skipped_points: int = 0) -> 'DimensionEstimate':
        raw = [float(v) for v in raw_values]
        return cls(
            n_hat=_nearest_integer(float(np.mean(raw))),
            raw_values=raw,
            k1=k1,
            k2=k2,
            skipped_points=skipped_points,
        )

    @property
    def mean(self) -> float:
        return float(np.mean(self.raw_values))

    def truncated(self, k2: int) -> 'DimensionEstimate':
        """Estimate restricted to k in [k1, k2] for a smaller k2"""
        if not self.k1 <= k2 <= self.k2:
            raise ValueError(f"k2={k2} outside [{self.k1}, {self.k2}]")
        return DimensionEstimate.from_raw(self.raw_values[:k2 - self.k1 + 1], self.k1, k2, self.skipped_points)

    def sweep(self, k2_values: Iterable[int]) -> Dict[int, int]:
        """Rounded estimate for every k2 in the sweep"""
        return {int(k2): self.truncated(int(k2)).n_hat for k2 in k2_values}


class DensityField(BaseModel):
    """Per-point density estimates"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    values: np.ndarray
    kernel: KernelType
    bandwidth: Optional[float] = None
    distance_source: Optional[DistanceSource] = None
    dimension: int = Field(..., ge=1)
    leave_one_out: bool = False

    @model_validator(mode='after')
    def _check_values(self) -> 'DensityField':
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("density values must be one-dimensional")
        if not np.all(np.isfinite(values)) or not np.all(values > 0):
            raise ValueError("density values must be finite and strictly positive")
        if self.bandwidth is not None and self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        self.values = values
        return self

    @classmethod
    def from_truth(cls, values: np.ndarray, dimension: int) -> 'DensityField':
        """Inject ground-truth density (oracle mode)"""
        return cls(values=np.asarray(values, dtype=np.float64), kernel=KernelType.ORACLE, dimension=dimension)

    @property
    def n_points(self) -> int:
        return int(self.values.size)

    def reciprocals(self) -> np.ndarray:
        return 1.0 / self.values
