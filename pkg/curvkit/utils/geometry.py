"""
Closed-form volumes shared by the estimators and the samplers
"""

import math
from typing import Union

import numpy as np
from scipy.special import gammaln

ArrayLike = Union[float, np.ndarray]


def unit_ball_volume(n: int) -> float:
    """v_n = pi^(n/2) / Gamma(n/2 + 1)"""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1.0))


def euclidean_ball_volume(n: int, r: ArrayLike) -> ArrayLike:
    """v_n r^n, elementwise for array radii"""
    r = np.asarray(r, dtype=np.float64)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    volume = unit_ball_volume(n) * r ** n
    return float(volume) if volume.ndim == 0 else volume


def sphere_volume(n: int) -> float:
    """Volume of the unit n-sphere S^n: 2 pi^((n+1)/2) / Gamma((n+1)/2)"""
    m = 0.5 * (n + 1)
    return 2.0 * math.exp(m * math.log(math.pi) - gammaln(m))
