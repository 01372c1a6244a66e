from .base import ManifoldSampler
from .sphere import SphereSampler
from .euclidean_disk import EuclideanDiskSampler
from .poincare_disk import PoincareDiskSampler
from .torus import TorusSampler
from .hyperboloid import HyperboloidSampler

__all__ = [
    'ManifoldSampler',
    'SphereSampler',
    'EuclideanDiskSampler',
    'PoincareDiskSampler',
    'TorusSampler',
    'HyperboloidSampler'
]
