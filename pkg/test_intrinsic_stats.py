"""
Tests for intrinsic dimension, kernel density and in-ball density averages
Run with: pytest test_intrinsic_stats.py
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.integrate import quad

from curvkit.config.constants import DistanceSource, KernelType
from curvkit.engines.density_engine import (
    KernelDensityEstimator,
    arithmetic_ball_density,
    default_bandwidth,
    kde_density,
    kernel_constant,
    mean_ball_density,
)
from curvkit.engines.dimension_engine import levina_bickel, nearest_neighbor_distances, pointwise_levina_bickel
from curvkit.engines.metric_engine import pairwise_euclidean
from curvkit.exceptions import DensityError, MetricValidationError
from curvkit.models.metric import DistanceMatrix, PointCloud
from curvkit.models.stats import DensityField, DimensionEstimate
from curvkit.services.manifold_samplers import SphereSampler
from curvkit.utils.geometry import unit_ball_volume


def line_distances(xs):
    xs = np.asarray(xs, dtype=np.float64)
    return DistanceMatrix.from_square(np.abs(xs[:, None] - xs[None, :]))


# Dimension

def test_pointwise_estimate_from_three_distances():
    value = pointwise_levina_bickel(np.array([[1.0, 2.0, 3.0]]), 3)[0]
    assert value == pytest.approx(2.0 / (math.log(3.0) + math.log(1.5)), rel=1e-14)
    assert value == pytest.approx(1.3297, abs=1e-4)


def test_pointwise_estimate_is_infinite_for_tied_distances():
    assert np.isinf(pointwise_levina_bickel(np.array([[2.0, 2.0, 2.0]]), 3)[0])
    with pytest.raises(ValueError):
        pointwise_levina_bickel(np.array([[1.0, 2.0]]), 1)


def test_nearest_neighbor_distances_exclude_self():
    t = nearest_neighbor_distances(line_distances([0.0, 1.0, 3.0, 6.0]), 2, block_size=3)
    assert t.tolist() == [[1.0, 3.0], [1.0, 2.0], [2.0, 3.0], [3.0, 5.0]]


def test_unit_square_is_two_dimensional():
    cloud = PointCloud(np.random.default_rng(0).random((2000, 2)))
    estimate = levina_bickel(pairwise_euclidean(cloud), 10, 20)
    assert estimate.n_hat == 2
    assert len(estimate.raw_values) == 11
    assert 1.7 < estimate.mean < 2.3


def test_dimension_is_exactly_scale_invariant_for_doubling():
    d = pairwise_euclidean(PointCloud(np.random.default_rng(1).random((300, 3))))
    base = levina_bickel(d, 5, 15)
    doubled = levina_bickel(d.scaled(2.0), 5, 15)
    assert doubled.raw_values == base.raw_values


def test_duplicate_points_are_skipped_with_a_warning(caplog_loguru):
    coordinates = np.random.default_rng(2).random((200, 2))
    coordinates[1] = coordinates[0]
    estimate = levina_bickel(pairwise_euclidean(PointCloud(coordinates)), 5, 10)
    assert estimate.skipped_points == 2
    assert estimate.n_hat == 2
    assert any('zero neighbor distance' in message for message in caplog_loguru)


def test_dimension_rejects_bad_k_range():
    d = line_distances(np.arange(10.0))
    with pytest.raises(MetricValidationError):
        levina_bickel(d, 1, 5)
    with pytest.raises(MetricValidationError):
        levina_bickel(d, 6, 5)
    with pytest.raises(MetricValidationError):
        levina_bickel(d, 2, 10)


def test_dimension_sweep_and_truncation():
    estimate = DimensionEstimate.from_raw([2.0, 2.2, 3.5, 4.5], k1=2, k2=5)
    assert estimate.n_hat == 3
    assert estimate.truncated(3).raw_values == [2.0, 2.2]
    assert estimate.truncated(3).n_hat == 2
    assert estimate.sweep([2, 3, 4, 5]) == {2: 2, 3: 2, 4: 3, 5: 3}
    with pytest.raises(ValueError):
        estimate.truncated(6)


def test_dimension_estimate_rounds_half_up_and_validates():
    assert DimensionEstimate.from_raw([2.5], 2, 2).n_hat == 3
    with pytest.raises(ValidationError):
        DimensionEstimate(n_hat=5, raw_values=[2.0], k1=2, k2=2)
    with pytest.raises(ValidationError):
        DimensionEstimate(n_hat=2, raw_values=[2.0, 2.0], k1=2, k2=2)


# Kernels

@pytest.mark.parametrize('n', [1, 2, 3, 5])
@pytest.mark.parametrize('kernel, profile, upper', [
    (KernelType.GAUSSIAN, lambda u: math.exp(-0.5 * u * u), np.inf),
    (KernelType.BIWEIGHT, lambda u: (1.0 - u * u) ** 2, 1.0),
])
def test_kernel_constants_normalize(n, kernel, profile, upper):
    surface = n * unit_ball_volume(n)
    mass, _ = quad(lambda u: surface * u ** (n - 1) * profile(u), 0.0, upper)
    assert kernel_constant(kernel, n) * mass == pytest.approx(1.0, rel=1e-9)


def test_kernel_constant_closed_forms():
    assert kernel_constant(KernelType.GAUSSIAN, 2) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-15)
    assert kernel_constant(KernelType.BIWEIGHT, 2) == pytest.approx(3.0 / math.pi, rel=1e-15)
    with pytest.raises(ValueError):
        kernel_constant(KernelType.ORACLE, 2)


def test_gaussian_single_point_density():
    estimator = KernelDensityEstimator(KernelType.GAUSSIAN, n_hat=2, bandwidth=1.0)
    assert estimator.density_at([[0.0]])[0] == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-15)


def test_gaussian_two_point_density_includes_self():
    field = kde_density(line_distances([0.0, 1.0]), 1, KernelType.GAUSSIAN, bandwidth=1.0)
    expected = (1.0 + math.exp(-0.5)) / (2.0 * math.sqrt(2.0 * math.pi))
    assert field.values == pytest.approx([expected, expected], rel=1e-14)
    assert field.bandwidth == 1.0


def test_isolated_biweight_point_keeps_its_self_term():
    field = kde_density(line_distances([0.0, 10.0, 10.5]), 1, KernelType.BIWEIGHT, bandwidth=1.0)
    assert field.values[0] == pytest.approx(kernel_constant(KernelType.BIWEIGHT, 1) / 3.0, rel=1e-14)
    assert np.all(field.values > 0)


def test_leave_one_out_drops_the_self_term():
    field = kde_density(line_distances([0.0, 1.0]), 1, KernelType.GAUSSIAN, bandwidth=1.0, leave_one_out=True)
    expected = math.exp(-0.5) / math.sqrt(2.0 * math.pi)
    assert field.values == pytest.approx([expected, expected], rel=1e-14)
    assert field.leave_one_out


def test_leave_one_out_differs_from_the_full_sum_by_the_self_term():
    d = line_distances([0.0, 0.3, 0.7, 1.6, 2.0])
    h, n = 0.8, 1
    full = kde_density(d, n, KernelType.GAUSSIAN, bandwidth=h).values
    loo = kde_density(d, n, KernelType.GAUSSIAN, bandwidth=h, leave_one_out=True).values
    self_term = kernel_constant(KernelType.GAUSSIAN, n) / h ** n
    assert loo * (d.n_points - 1) + self_term == pytest.approx(full * d.n_points, rel=1e-12)


def test_leave_one_out_rejects_isolated_points():
    with pytest.raises(DensityError):
        kde_density(line_distances([0.0, 10.0, 10.5]), 1, KernelType.BIWEIGHT, bandwidth=1.0, leave_one_out=True)
    with pytest.raises(ValueError):
        KernelDensityEstimator(KernelType.GAUSSIAN, n_hat=1, bandwidth=1.0, leave_one_out=True).density_at([[0.0, 1.0]])


def test_density_rejects_bad_parameters():
    with pytest.raises(DensityError):
        KernelDensityEstimator(KernelType.BIWEIGHT, n_hat=2, bandwidth=0.0)
    with pytest.raises(DensityError):
        KernelDensityEstimator(KernelType.GAUSSIAN, n_hat=0, bandwidth=1.0)
    with pytest.raises(DensityError):
        default_bandwidth(DistanceMatrix(3, np.zeros(3)))


def test_default_bandwidth():
    assert default_bandwidth(line_distances([0.0, 1.0])) == 1.0
    # N=4: ceil(sqrt(4)) = 2nd nearest neighbor
    assert default_bandwidth(line_distances([0.0, 1.0, 2.0, 3.0])) == pytest.approx((2 + 1 + 1 + 2) / 4)


def test_kde_without_bandwidth_uses_the_default():
    d = pairwise_euclidean(PointCloud(np.random.default_rng(5).random((50, 2))))
    field = kde_density(d, 2, distance_source=DistanceSource.EUCLIDEAN)
    assert field.bandwidth == default_bandwidth(d)
    assert field.distance_source == DistanceSource.EUCLIDEAN
    assert field.kernel == KernelType.GAUSSIAN


def test_kde_is_permutation_equivariant():
    coordinates = np.random.default_rng(6).random((120, 3))
    order = np.random.default_rng(7).permutation(120)
    base = kde_density(pairwise_euclidean(PointCloud(coordinates)), 3, bandwidth=0.3).values
    permuted = kde_density(pairwise_euclidean(PointCloud(coordinates[order])), 3, bandwidth=0.3).values
    assert np.allclose(permuted, base[order], rtol=1e-12, atol=0)


def test_sphere_kde_recovers_the_uniform_density():
    sample = SphereSampler(2).sample(2000, seed=3)
    field = kde_density(sample.exact_distances, 2, KernelType.GAUSSIAN)
    assert np.median(field.values) == pytest.approx(1.0 / (4.0 * math.pi), rel=0.1)


# Ball averages

def three_point_field():
    d = line_distances([0.0, 1.0, 2.0])
    field = DensityField(values=np.array([5.0, 1.0, 3.0]), kernel=KernelType.GAUSSIAN, dimension=1)
    return d, field


def test_harmonic_ball_density():
    d, field = three_point_field()
    assert mean_ball_density(field, d, 0, 2.0) == pytest.approx(1.5, rel=1e-15)
    assert arithmetic_ball_density(field, d, 0, 2.0) == 2.0


def test_empty_ball_falls_back_to_the_center_density():
    d, field = three_point_field()
    assert mean_ball_density(field, d, 0, 0.5) == 5.0
    assert arithmetic_ball_density(field, d, 0, 0.5) == 5.0


def test_constant_field_has_constant_ball_density():
    d = pairwise_euclidean(PointCloud(np.random.default_rng(8).random((40, 2))))
    field = DensityField(values=np.full(40, 0.25), kernel=KernelType.GAUSSIAN, dimension=2)
    for r in (0.1, 0.4, 2.0):
        assert mean_ball_density(field, d, 3, r) == pytest.approx(0.25, rel=1e-14)


def test_harmonic_never_exceeds_arithmetic():
    rng = np.random.default_rng(9)
    d = pairwise_euclidean(PointCloud(rng.random((60, 2))))
    field = DensityField(values=rng.uniform(0.1, 5.0, 60), kernel=KernelType.GAUSSIAN, dimension=2)
    for x in range(0, 60, 6):
        for r in (0.1, 0.3, 0.7):
            assert mean_ball_density(field, d, x, r) <= arithmetic_ball_density(field, d, x, r) * (1 + 1e-12)


def test_density_field_rejects_nonpositive_values():
    with pytest.raises(ValidationError):
        DensityField(values=np.array([1.0, 0.0]), kernel=KernelType.GAUSSIAN, dimension=1)
    truth = DensityField.from_truth(np.array([0.5, 2.0]), dimension=2)
    assert truth.kernel == KernelType.ORACLE
    assert truth.reciprocals().tolist() == [2.0, 0.5]
