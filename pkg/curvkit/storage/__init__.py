from .matrix_files import (
    load_distance_matrix,
    save_distance_matrix,
    load_point_cloud,
    save_point_cloud,
    load_mask,
    save_mask,
)
from .graph_files import load_graph, save_graph
from .report_files import (
    save_reports,
    save_ratios,
    save_labels,
    load_labels,
    save_profile,
    save_json,
    load_reports,
)

__all__ = [
    'load_distance_matrix',
    'save_distance_matrix',
    'load_point_cloud',
    'save_point_cloud',
    'load_mask',
    'save_mask',
    'load_graph',
    'save_graph',
    'save_reports',
    'save_ratios',
    'save_labels',
    'load_labels',
    'save_profile',
    'save_json',
    'load_reports',
]
