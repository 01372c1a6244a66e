"""
Constants and configuration values for curvkit
"""

import math
from enum import Enum
from typing import Dict, List


class KernelType(str, Enum):
    """Density kernels"""
    GAUSSIAN = "gaussian"
    BIWEIGHT = "biweight"
    ORACLE = "oracle"  # ground-truth density injected, no kernel


class DistanceSource(str, Enum):
    """Which distances a density estimate was computed from"""
    EXACT = "exact"
    GRAPH = "graph"
    EUCLIDEAN = "euclidean"


class DensitySource(str, Enum):
    """Experiment-level choice of kernel input"""
    GEODESIC = "geodesic"
    EUCLIDEAN = "euclidean"
    ORACLE = "oracle"


class DistanceMode(str, Enum):
    """How an experiment obtains its distance matrix"""
    EXACT = "exact"
    GRAPH = "graph"


class ScheduleMode(str, Enum):
    """Radius schedule choices"""
    NEAREST_NEIGHBOR = "nearest_neighbor"
    EQUAL_SPACING = "equal_spacing"


class ManifoldTag(str, Enum):
    """Synthetic manifolds with closed-form curvature"""
    SPHERE = "sphere"
    EUCLIDEAN_DISK = "euclidean_disk"
    POINCARE_DISK = "poincare_disk"
    TORUS = "torus"
    HYPERBOLOID = "hyperboloid"


class DistanceFormat(str, Enum):
    """On-disk distance matrix formats"""
    CSV = "csv"
    BINARY = "binary"


# Binary distance matrix header
DMAT_MAGIC = b"DMAT"
DMAT_VERSION = 1

# Metric validation tolerances
ASYMMETRY_TOLERANCE = 1e-9  # relative to max entry
DIAGONAL_TOLERANCE = 1e-12
TRIANGLE_TOLERANCE = 1e-12

# Dimension estimation
DEFAULT_K1 = 20
DEFAULT_K2 = 100
K2_SWEEP: List[int] = list(range(30, 101))

# Geodesic k-NN graph size per intrinsic dimension
GEODESIC_K: Dict[int, int] = {
    2: 20,
    3: 50,
    5: 100,
    7: 200,
}

# Maximum ball radius per manifold
R_MAX: Dict[ManifoldTag, float] = {
    ManifoldTag.SPHERE: math.pi / 2,
    ManifoldTag.EUCLIDEAN_DISK: 1.0,
    ManifoldTag.POINCARE_DISK: 1.0,
    ManifoldTag.TORUS: math.pi,
    ManifoldTag.HYPERBOLOID: 2.0,
}
DEFAULT_R_MIN = 0.0

# Poincare disk KDE: leave-one-out with a fixed bandwidth. With the self term
# and the default bandwidth the density bias pulls the median S_hat toward 0.
POINCARE_BANDWIDTH = 0.2

# Noise levels for the noisy sphere runs
NOISE_LEVELS: List[float] = [0.001, 0.003, 0.01, 0.03]

# Sample sizes
DEFAULT_SAMPLE_COUNT = 4000
FULL_SAMPLE_COUNT = 10000

# Histogram
DEFAULT_HISTOGRAM_BINS = 50

# Experiment config schema
CONFIG_SCHEMA_VERSION = 1


def geodesic_k_for(dimension: int) -> int:
    """k-NN graph size for an intrinsic dimension, nearest tabulated entry"""
    if dimension in GEODESIC_K:
        return GEODESIC_K[dimension]
    nearest = min(GEODESIC_K, key=lambda n: (abs(n - dimension), n))
    return GEODESIC_K[nearest]
