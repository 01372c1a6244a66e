"""
Radius schedules, ball-volume estimates and curvature reports
"""

import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from curvkit.config.constants import ScheduleMode


class RadiusSchedule(BaseModel):
    """
    Radii at which ball volumes are estimated.

    Equal spacing uses r_i = r_min + i * spacing for i = 1..m with
    m = (r_max - r_min) / spacing. Nearest-neighbor mode uses the sorted
    distances from each evaluation point, filtered to [r_min, r_max].
    """

    r_min: float = Field(0.0, ge=0.0)
    r_max: float
    mode: ScheduleMode = ScheduleMode.NEAREST_NEIGHBOR
    spacing: Optional[float] = None

    @model_validator(mode='after')
    def _check(self) -> 'RadiusSchedule':
        if not self.r_max > self.r_min:
            raise ValueError(f"r_max ({self.r_max}) must exceed r_min ({self.r_min})")
        if self.mode == ScheduleMode.EQUAL_SPACING:
            if self.spacing is None or self.spacing <= 0:
                raise ValueError("equal spacing requires a positive spacing")
            steps = (self.r_max - self.r_min) / self.spacing
            if steps < 1 - 1e-9 or abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
                raise ValueError(
                    f"(r_max - r_min) / spacing = {steps} must be a positive integer"
                )
        return self

    @classmethod
    def parse(cls, text: str, r_min: float, r_max: float) -> 'RadiusSchedule':
        """Parse the CLI form 'nn' or 'grid:<spacing>'"""
        text = text.strip().lower()
        if text in ('nn', 'nearest_neighbor'):
            return cls(r_min=r_min, r_max=r_max)
        if text.startswith('grid:'):
            return cls(r_min=r_min, r_max=r_max, mode=ScheduleMode.EQUAL_SPACING, spacing=float(text[5:]))
        raise ValueError(f"unknown schedule '{text}', expected 'nn' or 'grid:<spacing>'")

    @property
    def steps(self) -> Optional[int]:
        if self.mode != ScheduleMode.EQUAL_SPACING:
            return None
        return int(round((self.r_max - self.r_min) / self.spacing))

    def grid(self) -> np.ndarray:
        """r_1..r_m of the equal-spacing schedule, last node exactly r_max"""
        m = self.steps
        if m is None:
            raise ValueError("grid() is only defined for equal spacing")
        radii = self.r_min + self.spacing * np.arange(1, m + 1, dtype=np.float64)
        radii[-1] = self.r_max
        return radii

    def describe(self) -> str:
        if self.mode == ScheduleMode.EQUAL_SPACING:
            return f"grid:{self.spacing}"
        return "nn"


class BallVolumeEstimate(BaseModel):
    """Estimated volume of the geodesic ball B(x, r)"""

    radius: float = Field(..., ge=0.0)
    count: int = Field(..., ge=0)
    mean_density: float = Field(..., gt=0.0)
    volume: float = Field(..., ge=0.0)

    @model_validator(mode='after')
    def _check(self) -> 'BallVolumeEstimate':
        if (self.volume == 0.0) != (self.count == 0):
            raise ValueError("volume is zero exactly when the ball holds no other point")
        return self


class RatioSequence(BaseModel):
    """Estimated ball-volume ratios y_i at radii r_i for one point"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    point_index: int
    radii: np.ndarray
    ratios: np.ndarray
    r_min: float
    r_max: float
    truncated: bool = False

    def __len__(self) -> int:
        return int(self.radii.size)


class CurvatureReport(BaseModel):
    """Per-point curvature estimate"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    point_index: int
    n_hat: int
    c_hat: float
    s_hat: float
    true_s: Optional[float] = None
    n_radii: int = 0
    r_max_effective: Optional[float] = None
    ratios: Optional[RatioSequence] = None

    @model_validator(mode='after')
    def _check(self) -> 'CurvatureReport':
        if self.s_hat != -6.0 * (self.n_hat + 2) * self.c_hat and not (
            math.isnan(self.s_hat) and math.isnan(self.c_hat)
        ):
            raise ValueError("s_hat must equal -6 (n_hat + 2) c_hat")
        return self

    @classmethod
    def build(cls, point_index: int, n_hat: int, c_hat: float, **kwargs) -> 'CurvatureReport':
        return cls(point_index=point_index, n_hat=n_hat, c_hat=c_hat,
                   s_hat=-6.0 * (n_hat + 2) * c_hat, **kwargs)
