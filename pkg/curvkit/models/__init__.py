from .metric import DistanceMatrix, PointCloud, EvaluationSet
from .sample import LabeledSample, NoiseSpec
from .graph import WeightedGraph
from .stats import DimensionEstimate, DensityField
from .curvature import RadiusSchedule, BallVolumeEstimate, RatioSequence, CurvatureReport
from .experiment import (
    ExperimentConfig,
    ExperimentSummary,
    ExperimentResult,
    HistogramSummary,
    CriterionResult,
    AcceptanceReport,
)

__all__ = [
    'DistanceMatrix',
    'PointCloud',
    'EvaluationSet',
    'LabeledSample',
    'NoiseSpec',
    'WeightedGraph',
    'DimensionEstimate',
    'DensityField',
    'RadiusSchedule',
    'BallVolumeEstimate',
    'RatioSequence',
    'CurvatureReport',
    'ExperimentConfig',
    'ExperimentSummary',
    'ExperimentResult',
    'HistogramSummary',
    'CriterionResult',
    'AcceptanceReport',
]
