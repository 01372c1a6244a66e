"""
Experiment configuration and result schemas
"""

from typing import Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from curvkit.config.constants import (
    CONFIG_SCHEMA_VERSION,
    DEFAULT_HISTOGRAM_BINS,
    DEFAULT_K1,
    DEFAULT_K2,
    DEFAULT_R_MIN,
    K2_SWEEP,
    DensitySource,
    DistanceMode,
    KernelType,
    ManifoldTag,
)
from curvkit.models.curvature import CurvatureReport, RadiusSchedule


class ExperimentConfig(BaseModel):
    """One end-to-end estimation run, serialised as versioned JSON"""
    model_config = ConfigDict(extra='forbid', use_enum_values=False)

    schema_version: Literal[1] = CONFIG_SCHEMA_VERSION
    name: str

    # Data: either a synthetic manifold or external files
    manifold: Optional[ManifoldTag] = None
    manifold_dimension: int = Field(2, ge=1)
    count: int = Field(4000, ge=2)
    seed: int = 0
    noise_sigma: float = Field(0.0, ge=0.0)
    distance_path: Optional[str] = None
    cloud_path: Optional[str] = None
    graph_path: Optional[str] = None
    mask_path: Optional[str] = None
    strict: bool = False

    # Distances
    distance_mode: DistanceMode = DistanceMode.EXACT
    geodesic_k: Optional[int] = Field(None, ge=1)

    # Dimension
    k1: int = Field(DEFAULT_K1, ge=2)
    k2: int = Field(DEFAULT_K2, ge=2)
    k2_sweep: List[int] = Field(default_factory=lambda: list(K2_SWEEP))
    dimension: Optional[int] = Field(None, ge=1)

    # Density
    kernel: KernelType = KernelType.GAUSSIAN
    bandwidth: Optional[float] = Field(None, gt=0.0)
    density_source: DensitySource = DensitySource.GEODESIC
    leave_one_out: bool = False

    # Curvature
    r_min: float = Field(DEFAULT_R_MIN, ge=0.0)
    r_max: float = Field(..., gt=0.0)
    schedule: str = "nn"

    # Output
    bins: int = Field(DEFAULT_HISTOGRAM_BINS, ge=1)
    log_log: bool = False
    dump_ratios: bool = False
    output_dir: Optional[str] = None

    @model_validator(mode='after')
    def _check_combinations(self) -> 'ExperimentConfig':
        external = [p for p in (self.distance_path, self.cloud_path, self.graph_path) if p]
        if (self.manifold is None) == (not external):
            raise ValueError("specify exactly one data source: a manifold or external data paths")
        if len(external) > 1:
            raise ValueError("specify at most one of distance_path, cloud_path, graph_path")
        if self.k1 > self.k2:
            raise ValueError(f"k1 ({self.k1}) must not exceed k2 ({self.k2})")
        if any(k < self.k1 for k in self.k2_sweep):
            raise ValueError("every k2 in the sweep must be >= k1")
        RadiusSchedule.parse(self.schedule, self.r_min, self.r_max)

        if self.manifold is not None:
            no_exact = self.manifold in (ManifoldTag.TORUS, ManifoldTag.HYPERBOLOID) or self.noise_sigma > 0
            if self.distance_mode == DistanceMode.EXACT and no_exact:
                raise ValueError(f"{self.manifold.value} sample has no exact distances; use distance_mode 'graph'")
            if self.manifold == ManifoldTag.POINCARE_DISK:
                if self.distance_mode == DistanceMode.GRAPH or self.density_source == DensitySource.EUCLIDEAN:
                    raise ValueError("the Poincare disk is not embedded; only exact geodesics are available")
                if self.noise_sigma > 0:
                    raise ValueError("noise requires an embedded sample")
            if self.manifold != ManifoldTag.SPHERE and self.manifold_dimension != 2:
                raise ValueError("only spheres support manifold_dimension != 2")
        else:
            if self.density_source == DensitySource.ORACLE:
                raise ValueError("oracle density needs a synthetic manifold")
            if self.density_source == DensitySource.EUCLIDEAN and not self.cloud_path:
                raise ValueError("euclidean density distances need a point cloud")
            if self.cloud_path and self.distance_mode == DistanceMode.EXACT:
                raise ValueError("a point cloud has no exact geodesics; use distance_mode 'graph'")
        if self.density_source == DensitySource.ORACLE and self.kernel != KernelType.ORACLE:
            self.kernel = KernelType.ORACLE
        if self.kernel == KernelType.ORACLE and self.density_source != DensitySource.ORACLE:
            raise ValueError("kernel 'oracle' requires density_source 'oracle'")
        return self

    @property
    def radius_schedule(self) -> RadiusSchedule:
        return RadiusSchedule.parse(self.schedule, self.r_min, self.r_max)


class ExperimentSummary(BaseModel):
    """Summary statistics, recomputable from the per-point reports"""

    n_points: int
    n_evaluated: int
    n_hat: int
    n_hat_sweep: Dict[int, int] = Field(default_factory=dict)
    true_dimension: Optional[int] = None
    bandwidth: Optional[float] = None
    mean: float
    median: float
    std: float
    fraction_positive: float
    fraction_negative: float
    sign_accuracy: Optional[float] = None
    correlation: Optional[float] = None
    truncated_schedules: int = 0
    stage_seconds: Dict[str, float] = Field(default_factory=dict)
    total_seconds: float = 0.0


class ExperimentResult(BaseModel):
    """Everything a run produced"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: ExperimentConfig
    reports: List[CurvatureReport]
    summary: ExperimentSummary
    coordinate_name: Optional[str] = None
    coordinate: Optional[np.ndarray] = None
    output_dir: Optional[str] = None

    def s_hat(self) -> np.ndarray:
        return np.array([r.s_hat for r in self.reports], dtype=np.float64)

    def true_s(self) -> np.ndarray:
        return np.array([np.nan if r.true_s is None else r.true_s for r in self.reports], dtype=np.float64)


class HistogramSummary(BaseModel):
    """Bin counts behind a rendered histogram"""

    counts: List[int]
    edges: List[float]
    path: Optional[str] = None
    log_log: bool = False


class CriterionResult(BaseModel):
    """Outcome of one acceptance criterion"""

    name: str
    preset: Optional[str] = None
    passed: bool
    measured: Dict[str, float] = Field(default_factory=dict)
    threshold: str = ""
    error: Optional[str] = None


class AcceptanceReport(BaseModel):
    """Machine-readable pass/fail summary"""

    results: List[CriterionResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[CriterionResult]:
        return [r for r in self.results if not r.passed]
