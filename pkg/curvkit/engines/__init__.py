"""
Engines for metric, geodesic, dimension, density and curvature computations
"""

from .metric_engine import pairwise_euclidean, ball_count
from .geodesic_engine import (
    build_knn_graph,
    knn_graph_from_cloud,
    shortest_path_distances,
    geodesic_distances,
    floyd_warshall_distances,
    load_graph,
)
from .dimension_engine import levina_bickel, pointwise_levina_bickel, nearest_neighbor_distances
from .density_engine import (
    KernelDensityEstimator,
    kernel_constant,
    kde_density,
    default_bandwidth,
    mean_ball_density,
    arithmetic_ball_density,
)
from .curvature_engine import (
    CurvatureEngine,
    euclidean_ball_volume,
    estimate_ball_volume,
    volume_from_mean_density,
    ratio_sequence,
    ratio_sequence_direct,
    fit_quadratic_coefficient,
    estimate_scalar_curvature,
)

__all__ = [
    'pairwise_euclidean',
    'ball_count',
    'build_knn_graph',
    'knn_graph_from_cloud',
    'shortest_path_distances',
    'geodesic_distances',
    'floyd_warshall_distances',
    'load_graph',
    'levina_bickel',
    'pointwise_levina_bickel',
    'nearest_neighbor_distances',
    'KernelDensityEstimator',
    'kernel_constant',
    'kde_density',
    'default_bandwidth',
    'mean_ball_density',
    'arithmetic_ball_density',
    'CurvatureEngine',
    'euclidean_ball_volume',
    'estimate_ball_volume',
    'volume_from_mean_density',
    'ratio_sequence',
    'ratio_sequence_direct',
    'fit_quadratic_coefficient',
    'estimate_scalar_curvature',
]
