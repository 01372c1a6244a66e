from .constants import (
    KernelType,
    DistanceSource,
    DensitySource,
    DistanceMode,
    ScheduleMode,
    ManifoldTag,
    DistanceFormat,
)
from .settings import Settings, get_settings

__all__ = [
    'KernelType',
    'DistanceSource',
    'DensitySource',
    'DistanceMode',
    'ScheduleMode',
    'ManifoldTag',
    'DistanceFormat',
    'Settings',
    'get_settings',
]
