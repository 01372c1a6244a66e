"""
Sampler service: selects a manifold sampler by tag and perturbs samples with noise
"""

from typing import Any, Dict

from curvkit.config.constants import ManifoldTag
from curvkit.exceptions import SamplerError
from curvkit.models.metric import PointCloud
from curvkit.models.sample import LabeledSample, NoiseSpec
from curvkit.utils.helpers import make_rng
from curvkit.utils.logger import logger

from .manifold_samplers import (
    ManifoldSampler,
    SphereSampler,
    EuclideanDiskSampler,
    PoincareDiskSampler,
    TorusSampler,
    HyperboloidSampler
)


class SamplerService:
    """Builds samplers for the synthetic data sets"""

    def __init__(self):
        self.samplers = {
            ManifoldTag.SPHERE: SphereSampler,
            ManifoldTag.EUCLIDEAN_DISK: EuclideanDiskSampler,
            ManifoldTag.POINCARE_DISK: PoincareDiskSampler,
            ManifoldTag.TORUS: TorusSampler,
            ManifoldTag.HYPERBOLOID: HyperboloidSampler
        }

    def get_sampler(self, tag: ManifoldTag, **params: Any) -> ManifoldSampler:
        try:
            sampler_class = self.samplers[ManifoldTag(tag)]
        except (KeyError, ValueError) as error:
            raise SamplerError(f"unknown manifold '{tag}'") from error
        return sampler_class(**params)

    def sample(self, tag: ManifoldTag, count: int, seed: int = 0, **params: Any) -> LabeledSample:
        """
        Draw a labeled sample

        Args:
            tag: Manifold identifier
            count: Number of points (evaluation-band target for the hyperboloid)
            seed: RNG seed
            **params: Sampler parameters such as the sphere dimension

        Returns:
            LabeledSample with ground-truth curvature and density
        """
        try:
            return self.get_sampler(tag, **params).sample(count, seed)
        except Exception as error:
            logger.error(f"❌ Sampling {tag} failed: {error}")
            raise

    def parameters_for(self, tag: ManifoldTag, dimension: int = 2) -> Dict[str, Any]:
        """Constructor parameters for a manifold tag (only spheres vary in dimension)"""
        if ManifoldTag(tag) == ManifoldTag.SPHERE:
            return {'dimension': dimension}
        if dimension != 2:
            raise SamplerError(f"{ManifoldTag(tag).value} is two-dimensional")
        return {}


def add_noise(sample: LabeledSample, spec: NoiseSpec) -> LabeledSample:
    """
    Perturb ambient coordinates with isotropic Gaussian noise

    Exact distances are dropped; ground-truth labels are kept for scoring.
    """
    if not sample.cloud.embedded:
        raise SamplerError(f"{sample.manifold_tag.value} sample is not embedded; noise is undefined")
    rng = make_rng(spec.seed)
    coordinates = sample.cloud.coordinates + spec.sigma * rng.standard_normal(sample.cloud.coordinates.shape)
    logger.info(f"✅ Added Gaussian noise sigma={spec.sigma:g} to {sample.n_points} points")
    return sample.model_copy(update={
        'cloud': PointCloud(coordinates),
        'exact_distances': None,
        'noise': spec,
    })


sampler_service = SamplerService()
