"""
Services for sampling, experiments, histograms and acceptance checks
"""

from .sampler_service import SamplerService, sampler_service, add_noise
from .histogram_service import emit_histogram, histogram_counts
from .experiment_service import ExperimentService, experiment_service, run_experiment, summarize, curvature_profile
from .acceptance_service import AcceptanceService, acceptance_suite

__all__ = [
    'SamplerService',
    'sampler_service',
    'add_noise',
    'emit_histogram',
    'histogram_counts',
    'ExperimentService',
    'experiment_service',
    'run_experiment',
    'summarize',
    'curvature_profile',
    'AcceptanceService',
    'acceptance_suite'
]
