import math

import numpy as np

from curvkit.config.constants import ManifoldTag
from curvkit.exceptions import SamplerError
from curvkit.models.metric import EvaluationSet, PointCloud
from curvkit.models.sample import LabeledSample
from curvkit.utils.helpers import make_rng
from curvkit.utils.logger import logger

from .base import ManifoldSampler


class HyperboloidSampler(ManifoldSampler):
    """
    One-sheet hyperboloid x^2/a^2 + y^2/a^2 - z^2/c^2 = 1, parametrized as
    (a sqrt(1 + u^2) cos(theta), a sqrt(1 + u^2) sin(theta), c u) for |u| <= height.

    `count` is the number of points wanted in the evaluation band |z| <= c * band;
    sampling continues on the full height until the band holds that many.
    """

    tag = ManifoldTag.HYPERBOLOID

    def __init__(self, a: float = 2.0, c: float = 1.0, height: float = 2.0, band: float = 1.0):
        if a <= 0 or c <= 0 or not 0 < band <= height:
            raise SamplerError("need a, c > 0 and 0 < band <= height")
        self.a = a
        self.c = c
        self.height = height
        self.band = band
        self.name = f'hyperboloid (a={a:g}, c={c:g})'

    def area_element(self, u: np.ndarray) -> np.ndarray:
        """sqrt(EG - F^2) of the (u, theta) chart"""
        a, c = self.a, self.c
        return np.sqrt(a ** 4 * u ** 2 + a ** 2 * c ** 2 * (1.0 + u ** 2))

    @property
    def volume(self) -> float:
        a, c = self.a, self.c
        alpha = math.sqrt(a ** 2 + c ** 2) / c ** 2
        t = c * self.height * alpha
        return 2.0 * math.pi * a * (t * math.sqrt(t ** 2 + 1.0) + math.asinh(t)) / alpha

    def gaussian_curvature(self, z: np.ndarray) -> np.ndarray:
        """K = -1 / (a^4 c^2 q^2), q = (1 + z^2/c^2) / a^2 + z^2 / c^4"""
        a, c = self.a, self.c
        q = (1.0 + z ** 2 / c ** 2) / a ** 2 + z ** 2 / c ** 4
        return -1.0 / (a ** 4 * c ** 2 * q ** 2)

    def scalar_curvature(self, z: np.ndarray) -> np.ndarray:
        return 2.0 * self.gaussian_curvature(np.asarray(z, dtype=np.float64))

    def embed(self, u: np.ndarray, theta: np.ndarray) -> np.ndarray:
        ring = self.a * np.sqrt(1.0 + u ** 2)
        return np.column_stack([ring * np.cos(theta), ring * np.sin(theta), self.c * u])

    def sample_chart(self, count: int, rng: np.random.Generator):
        """Area-uniform (u, theta) on |u| <= height, stopped once `count` lie in |u| <= band"""
        peak = float(self.area_element(np.array(self.height)))
        us, thetas = [], []
        inside = 0
        while inside < count:
            batch = max(2 * (count - inside), 256)
            u = self.height * (2.0 * rng.random(batch) - 1.0)
            theta = 2.0 * math.pi * rng.random(batch)
            keep = rng.random(batch) < self.area_element(u) / peak
            u, theta = u[keep], theta[keep]
            in_band = np.cumsum(np.abs(u) <= self.band)
            if inside + (in_band[-1] if in_band.size else 0) >= count:
                stop = int(np.searchsorted(in_band, count - inside)) + 1
                u, theta = u[:stop], theta[:stop]
            us.append(u)
            thetas.append(theta)
            inside += int(np.count_nonzero(np.abs(u) <= self.band))
        return np.concatenate(us), np.concatenate(thetas)

    def sample(self, count: int, seed: int = 0) -> LabeledSample:
        self._check_count(count)
        rng = make_rng(seed)
        u, theta = self.sample_chart(count, rng)
        points = self.embed(u, theta)
        z = points[:, 2]

        logger.info(f"✅ Sampled {z.size} points on the {self.name}, {count} in the evaluation band (seed {seed})")
        return LabeledSample(
            manifold_tag=self.tag,
            dimension=2,
            cloud=PointCloud(points),
            true_curvature=self.scalar_curvature(z),
            true_density=np.full(z.size, 1.0 / self.volume),
            evaluation_mask=EvaluationSet.from_mask(np.abs(u) <= self.band),
            coordinate_name='z',
            coordinate=z,
            parameters={'a': self.a, 'c': self.c, 'height': self.height, 'band': self.band},
        )
