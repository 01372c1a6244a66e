"""
Tests for ball volumes, ball-ratio sequences, the quadratic fit and the
scalar-curvature estimate
Run with: pytest test_curvature_estimator.py
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from curvkit.config.constants import KernelType, ScheduleMode
from curvkit.engines.curvature_engine import (
    CurvatureEngine,
    ball_volume_from_row,
    estimate_ball_volume,
    estimate_scalar_curvature,
    fit_quadratic_coefficient,
    ratio_sequence,
    ratio_sequence_direct,
    volume_from_mean_density,
)
from curvkit.engines.density_engine import kde_density
from curvkit.engines.metric_engine import pairwise_euclidean
from curvkit.exceptions import ScheduleError
from curvkit.models.curvature import CurvatureReport, RadiusSchedule
from curvkit.models.metric import DistanceMatrix, EvaluationSet, PointCloud
from curvkit.models.stats import DensityField
from curvkit.services.manifold_samplers import SphereSampler
from curvkit.utils.geometry import euclidean_ball_volume


def line_distances(xs):
    xs = np.asarray(xs, dtype=np.float64)
    return DistanceMatrix.from_square(np.abs(xs[:, None] - xs[None, :]))


def constant_field(n_points, value, dimension=2):
    return DensityField.from_truth(np.full(n_points, value), dimension)


def planar_instance(seed, n_points=150):
    rng = np.random.default_rng(seed)
    d = pairwise_euclidean(PointCloud(rng.random((n_points, 2))))
    field = DensityField(values=rng.uniform(0.5, 2.0, n_points), kernel=KernelType.GAUSSIAN, dimension=2)
    return d, field


# Euclidean ball volumes

def test_euclidean_ball_volumes():
    assert euclidean_ball_volume(2, 1.0) == pytest.approx(math.pi, rel=1e-15)
    assert euclidean_ball_volume(3, 2.0) == pytest.approx(32.0 * math.pi / 3.0, rel=1e-14)
    assert euclidean_ball_volume(7, 1.0) == pytest.approx(16.0 * math.pi ** 3 / 105.0, rel=1e-14)
    assert euclidean_ball_volume(7, 1.0) == pytest.approx(4.7248, abs=1e-4)
    assert np.allclose(euclidean_ball_volume(2, np.array([1.0, 2.0])), [math.pi, 4 * math.pi], rtol=1e-15)
    with pytest.raises(ValueError):
        euclidean_ball_volume(2, -1.0)


# Ball volume estimates

def test_constant_density_ball_volume():
    row = np.concatenate(([0.0], np.full(10, 0.1), np.full(90, 5.0)))
    inv = np.full(101, 4.0 * math.pi)
    assert ball_volume_from_row(row, 0, inv, 0.2) == pytest.approx(0.4 * math.pi, rel=1e-14)


def test_ball_volume_from_mixed_densities():
    row = np.array([0.0, 1.0, 1.0, 5.0, 5.0])
    inv = 1.0 / np.array([9.0, 2.0, 4.0, 7.0, 7.0])
    assert ball_volume_from_row(row, 0, inv, 1.0) == 0.1875


def test_ball_volume_excludes_the_center():
    row = np.array([0.0, 0.5, 3.0])
    inv = np.array([100.0, 1.0, 1.0])
    assert ball_volume_from_row(row, 0, inv, 1.0) == 0.5
    assert ball_volume_from_row(row, 0, inv, 0.0) == 0.0


def test_single_point_ball_ratio():
    d = line_distances(np.concatenate(([0.0, 0.3], 10.0 + np.arange(99.0))))
    field = constant_field(101, 1.0 / (4.0 * math.pi))
    schedule = RadiusSchedule(r_min=0.0, r_max=0.5, mode=ScheduleMode.EQUAL_SPACING, spacing=0.5)
    sequence = ratio_sequence(d, field, 0, schedule, 2)
    assert sequence.radii.tolist() == [0.5]
    assert sequence.ratios[0] == pytest.approx(0.16, rel=1e-14)
    assert not sequence.truncated


@pytest.mark.parametrize('seed', range(3))
def test_volume_forms_agree(seed):
    d, field = planar_instance(seed)
    for x in (0, 17, 90):
        for r in (0.0, 0.05, 0.2, 0.6, 2.0):
            estimate = estimate_ball_volume(d, field, x, r)
            assert volume_from_mean_density(estimate, d.n_points) == pytest.approx(estimate.volume, rel=1e-12, abs=0)


# Schedules

def test_grid_schedule():
    schedule = RadiusSchedule(r_min=0.1, r_max=0.5, mode=ScheduleMode.EQUAL_SPACING, spacing=0.1)
    assert schedule.steps == 4
    assert schedule.grid() == pytest.approx([0.2, 0.3, 0.4, 0.5], abs=1e-15)
    assert schedule.grid()[-1] == 0.5
    assert schedule.describe() == 'grid:0.1'


def test_schedule_parsing_and_validation():
    assert RadiusSchedule.parse('nn', 0.0, 1.0).mode == ScheduleMode.NEAREST_NEIGHBOR
    grid = RadiusSchedule.parse('grid:0.25', 0.0, 1.0)
    assert (grid.mode, grid.steps) == (ScheduleMode.EQUAL_SPACING, 4)
    with pytest.raises(ValueError):
        RadiusSchedule.parse('log:2', 0.0, 1.0)
    with pytest.raises(ValidationError):
        RadiusSchedule(r_min=1.0, r_max=1.0)
    with pytest.raises(ValidationError):
        RadiusSchedule(r_min=0.0, r_max=1.0, mode=ScheduleMode.EQUAL_SPACING, spacing=0.3)


def test_nearest_neighbor_schedule_keeps_one_radius_per_tie():
    d = line_distances([0.0, 1.0, -1.0, 2.0, 0.0, 10.0])
    field = constant_field(6, 1.0, dimension=1)
    sequence = ratio_sequence(d, field, 0, RadiusSchedule(r_min=0.0, r_max=3.0), 1)
    # The duplicate point at distance 0 gives no radius; the tie at 1 gives one
    assert sequence.radii.tolist() == [1.0, 2.0]
    # Ball counts 3 and 4 over N - 1 = 5, divided by v_1 r = 2 r
    assert sequence.ratios.tolist() == pytest.approx([(3 / 5) / 2.0, (4 / 5) / 4.0], rel=1e-15)
    assert sequence.r_max == 2.0


def test_nearest_neighbor_schedule_excludes_r_min():
    d = line_distances([0.0, 0.5, 1.0, 1.5])
    sequence = ratio_sequence(d, constant_field(4, 1.0, 1), 0, RadiusSchedule(r_min=0.5, r_max=1.5), 1)
    assert sequence.radii.tolist() == [1.0, 1.5]


def test_empty_schedule_raises():
    d = line_distances([0.0, 1.0, 2.0])
    field = constant_field(3, 1.0, 1)
    with pytest.raises(ScheduleError, match='increase r_max'):
        ratio_sequence(d, field, 0, RadiusSchedule(r_min=5.0, r_max=6.0), 1)
    with pytest.raises(ScheduleError):
        fit_quadratic_coefficient([], [], 0.0, 1.0)


def test_truncated_schedules_warn_once(caplog_loguru):
    d = line_distances([0.0, 1.0, 2.0, 3.0])
    field = constant_field(4, 1.0, 1)
    engine = CurvatureEngine(d, field, 1, RadiusSchedule(r_min=0.0, r_max=10.0), threads=2)
    reports = engine.estimate_all(keep_ratios=True)
    assert engine.truncated_count == 4
    assert all(report.ratios.truncated for report in reports)
    assert reports[0].r_max_effective == 3.0
    warnings = [m for m in caplog_loguru if 'exceeds the farthest neighbor' in m]
    assert len(warnings) == 1


@pytest.mark.parametrize('seed', range(4))
@pytest.mark.parametrize('schedule', [
    RadiusSchedule(r_min=0.0, r_max=0.5),
    RadiusSchedule(r_min=0.05, r_max=0.45),
    RadiusSchedule(r_min=0.0, r_max=0.5, mode=ScheduleMode.EQUAL_SPACING, spacing=0.01),
])
def test_incremental_and_direct_sequences_are_bit_identical(seed, schedule):
    d, field = planar_instance(seed)
    for x in range(0, d.n_points, 15):
        fast = ratio_sequence(d, field, x, schedule, 2)
        slow = ratio_sequence_direct(d, field, x, schedule, 2)
        assert fast.radii.tobytes() == slow.radii.tobytes()
        assert fast.ratios.tobytes() == slow.ratios.tobytes()
        assert (fast.r_max, fast.truncated) == (slow.r_max, slow.truncated)


# Quadratic fit

def test_flat_ratios_fit_zero():
    radii = np.linspace(0.1, 1.0, 10)
    assert fit_quadratic_coefficient(radii, np.ones(10), 0.0, 1.0) == 0.0


def test_fit_recovers_a_known_quadratic():
    radii = np.arange(1, 1001) / 1000.0
    c_hat = fit_quadratic_coefficient(radii, 1.0 - radii ** 2, 0.0, 1.0)
    assert c_hat == pytest.approx(-1.0, rel=0.005)


def test_single_radius_fit():
    assert fit_quadratic_coefficient([1.0], [1.2], 0.0, 1.0) == pytest.approx(1.0, rel=1e-14)


def test_fit_rejects_degenerate_range():
    with pytest.raises(ScheduleError):
        fit_quadratic_coefficient([1.0], [1.0], 1.0, 1.0)


def test_affine_response_of_the_fit():
    rng = np.random.default_rng(3)
    radii = np.sort(rng.uniform(0.2, 1.0, 40))
    ratios = rng.uniform(0.5, 1.5, 40)
    r_min, r_max = 0.2, float(radii[-1])
    shift = 0.37
    increments = np.diff(radii, prepend=r_min)
    slope = np.sum(radii ** 2 * increments) / ((r_max ** 5 - r_min ** 5) / 5.0)
    delta = fit_quadratic_coefficient(radii, ratios + shift, r_min, r_max) - \
        fit_quadratic_coefficient(radii, ratios, r_min, r_max)
    assert delta == pytest.approx(shift * slope, rel=1e-12)


# Scalar curvature

def test_scalar_curvature_from_the_coefficient():
    assert CurvatureReport.build(0, 2, 0.0).s_hat == 0.0
    assert CurvatureReport.build(0, 2, -1.0 / 12.0).s_hat == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(ValidationError):
        CurvatureReport(point_index=0, n_hat=2, c_hat=0.1, s_hat=1.0)


def test_scale_covariance():
    sample = SphereSampler(2).sample(600, seed=5)
    d = sample.exact_distances
    field = DensityField.from_truth(sample.true_density, 2)
    scale = 3.0
    scaled_d = d.scaled(scale)
    scaled_field = DensityField.from_truth(sample.true_density / scale ** 2, 2)
    schedule = RadiusSchedule(r_min=0.0, r_max=1.0)
    scaled_schedule = RadiusSchedule(r_min=0.0, r_max=scale * 1.0)
    for x in (0, 11, 250):
        base = estimate_scalar_curvature(d, field, x, schedule, 2)
        scaled = estimate_scalar_curvature(scaled_d, scaled_field, x, scaled_schedule, 2)
        assert scaled.s_hat == pytest.approx(base.s_hat / scale ** 2, rel=1e-9)


def test_report_fields():
    d, field = planar_instance(7)
    report = estimate_scalar_curvature(d, field, 4, RadiusSchedule(r_min=0.0, r_max=0.3), 2, true_s=0.0,
                                       keep_ratios=True)
    assert report.s_hat == -6.0 * 4 * report.c_hat
    assert report.true_s == 0.0
    assert report.n_radii == len(report.ratios)
    assert report.r_max_effective == report.ratios.radii[-1]


def test_engine_orders_reports_and_ignores_thread_count():
    d = pairwise_euclidean(PointCloud(np.random.default_rng(11).random((200, 2))))
    field = kde_density(d, 2, KernelType.GAUSSIAN, bandwidth=0.15)
    schedule = RadiusSchedule(r_min=0.0, r_max=0.4)
    evaluation = EvaluationSet([150, 3, 77, 20], 200)
    single = CurvatureEngine(d, field, 2, schedule, threads=1).estimate_all(evaluation)
    many = CurvatureEngine(d, field, 2, schedule, threads=4).estimate_all(evaluation)
    assert [r.point_index for r in single] == [3, 20, 77, 150]
    assert [r.s_hat for r in single] == [r.s_hat for r in many]
    assert all(r.ratios is None for r in single)


def test_engine_attaches_true_curvature():
    d, field = planar_instance(8, n_points=60)
    truth = np.arange(60, dtype=np.float64)
    engine = CurvatureEngine(d, field, 2, RadiusSchedule(r_min=0.0, r_max=0.3), true_curvature=truth)
    reports = engine.estimate_all(EvaluationSet([5, 9], 60))
    assert [r.true_s for r in reports] == [5.0, 9.0]
