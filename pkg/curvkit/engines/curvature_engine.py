"""
Curvature engine: ball-volume estimates, ball-ratio sequences and the
scalar-curvature estimate S = -6 (n + 2) C
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

import numpy as np

from curvkit.config.constants import ScheduleMode
from curvkit.config.settings import get_settings
from curvkit.engines.density_engine import mean_ball_density
from curvkit.engines.metric_engine import ball_count
from curvkit.exceptions import ScheduleError
from curvkit.models.curvature import BallVolumeEstimate, CurvatureReport, RadiusSchedule, RatioSequence
from curvkit.models.metric import DistanceMatrix, EvaluationSet
from curvkit.models.stats import DensityField
from curvkit.utils.geometry import euclidean_ball_volume
from curvkit.utils.helpers import index_blocks
from curvkit.utils.logger import logger

__all__ = [
    'euclidean_ball_volume',
    'ball_volume_from_row',
    'estimate_ball_volume',
    'volume_from_mean_density',
    'ratio_sequence',
    'ratio_sequence_direct',
    'fit_quadratic_coefficient',
    'estimate_scalar_curvature',
    'CurvatureEngine',
]


def ball_volume_from_row(row: np.ndarray, x: int, inv_density: np.ndarray, r: float) -> float:
    """Sum of 1/rho over the ball around x (x excluded) divided by N - 1"""
    inside = row <= r
    inside[x] = False
    return float(np.sum(inv_density[inside]) / (row.size - 1))


def estimate_ball_volume(d: DistanceMatrix, field: DensityField, x: int, r: float) -> BallVolumeEstimate:
    """
    Volume estimate of the geodesic ball B(x, r)

    Args:
        d: Distance matrix
        field: Density estimates
        x: Center index
        r: Radius

    Returns:
        BallVolumeEstimate with volume = sum of 1/rho(z) over the ball / (N - 1)
    """
    volume = ball_volume_from_row(d.row(x), x, field.reciprocals(), r)
    return BallVolumeEstimate(
        radius=r,
        count=ball_count(d, x, r),
        mean_density=mean_ball_density(field, d, x, r),
        volume=volume,
    )


def volume_from_mean_density(estimate: BallVolumeEstimate, n_points: int) -> float:
    """The count / ((N - 1) mean density) form of the same estimate"""
    return estimate.count / ((n_points - 1) * estimate.mean_density)


def _nearest_neighbor_radii(distances: np.ndarray, r_min: float, r_max: float) -> np.ndarray:
    """Positions of the retained radii in a sorted row: r_min < r <= r_max, last of each tie"""
    last_of_run = np.ones(distances.size, dtype=bool)
    last_of_run[:-1] = distances[1:] != distances[:-1]
    keep = last_of_run & (distances > r_min) & (distances > 0) & (distances <= r_max)
    return np.flatnonzero(keep)


def _retained_radii(distances: np.ndarray, schedule: RadiusSchedule) -> Tuple[np.ndarray, np.ndarray]:
    """(radii, neighbor counts) of the schedule for one sorted row"""
    if schedule.mode == ScheduleMode.NEAREST_NEIGHBOR:
        positions = _nearest_neighbor_radii(distances, schedule.r_min, schedule.r_max)
        return distances[positions], positions + 1
    radii = schedule.grid()
    radii = radii[radii > 0]
    return radii, np.searchsorted(distances, radii, side='right')


def _finish_sequence(x, radii, volumes, n_hat, schedule, largest) -> RatioSequence:
    if radii.size == 0:
        raise ScheduleError(
            f"point {x}: no radius in ({schedule.r_min}, {schedule.r_max}]; increase r_max"
        )
    truncated = schedule.r_max > largest
    r_max = radii[-1] if schedule.mode == ScheduleMode.NEAREST_NEIGHBOR else schedule.r_max
    return RatioSequence(
        point_index=x,
        radii=radii,
        ratios=volumes / euclidean_ball_volume(n_hat, radii),
        r_min=schedule.r_min,
        r_max=float(r_max),
        truncated=bool(truncated),
    )


def ratio_sequence(
    d: DistanceMatrix,
    field: DensityField,
    x: int,
    schedule: RadiusSchedule,
    n_hat: int,
) -> RatioSequence:
    """
    Ball-volume ratios y_i = v(x, r_i) / (v_n r_i^n) along a schedule

    Volumes come from one running sum of 1/rho over the neighbors of x in
    (distance, index) order, so each radius costs O(1) after the sort.
    """
    distances, order = d.sorted_row(x)
    running = np.cumsum(field.reciprocals()[order])
    radii, counts = _retained_radii(distances, schedule)
    cumulative = np.concatenate(([0.0], running))
    volumes = cumulative[counts] / (d.n_points - 1)
    return _finish_sequence(x, radii, volumes, n_hat, schedule, distances[-1])


def ratio_sequence_direct(
    d: DistanceMatrix,
    field: DensityField,
    x: int,
    schedule: RadiusSchedule,
    n_hat: int,
) -> RatioSequence:
    """Reference evaluation of ratio_sequence: every ball volume summed from scratch"""
    distances, order = d.sorted_row(x)
    inv = field.reciprocals()[order]
    if schedule.mode == ScheduleMode.NEAREST_NEIGHBOR:
        radii = np.array(sorted({float(r) for r in distances if schedule.r_min < r <= schedule.r_max and r > 0}))
    else:
        radii = schedule.grid()
        radii = radii[radii > 0]

    totals = []
    for r in radii:
        total = 0.0
        for distance, weight in zip(distances, inv):
            if distance > r:
                break
            total += float(weight)
        totals.append(total)
    volumes = np.array(totals, dtype=np.float64) / (d.n_points - 1)
    return _finish_sequence(x, radii.astype(np.float64), volumes, n_hat, schedule, distances[-1])


def fit_quadratic_coefficient(radii: np.ndarray, ratios: np.ndarray, r_min: float, r_max: float) -> float:
    """
    Discretized best-fit quadratic coefficient of the ratio curve

    C = sum_i r_i^2 (y_i - 1)(r_i - r_{i-1}) / ((r_max^5 - r_min^5) / 5), r_0 = r_min
    """
    radii = np.asarray(radii, dtype=np.float64)
    ratios = np.asarray(ratios, dtype=np.float64)
    if radii.size == 0:
        raise ScheduleError("need at least one ratio to fit")
    if not r_max > r_min:
        raise ScheduleError(f"degenerate schedule: r_max ({r_max}) must exceed r_min ({r_min})")
    increments = np.diff(radii, prepend=r_min)
    numerator = np.sum(radii ** 2 * (ratios - 1.0) * increments)
    return float(numerator / ((r_max ** 5 - r_min ** 5) / 5.0))


def estimate_scalar_curvature(
    d: DistanceMatrix,
    field: DensityField,
    x: int,
    schedule: RadiusSchedule,
    n_hat: int,
    true_s: Optional[float] = None,
    keep_ratios: bool = False,
) -> CurvatureReport:
    """Full per-point estimate; S_hat = -6 (n_hat + 2) C_hat"""
    sequence = ratio_sequence(d, field, x, schedule, n_hat)
    c_hat = fit_quadratic_coefficient(sequence.radii, sequence.ratios, sequence.r_min, sequence.r_max)
    return CurvatureReport.build(
        point_index=x,
        n_hat=n_hat,
        c_hat=c_hat,
        true_s=true_s,
        n_radii=len(sequence),
        r_max_effective=sequence.r_max,
        ratios=sequence if keep_ratios else None,
    )


class CurvatureEngine:
    """Concurrent per-point curvature estimation over an evaluation set"""

    def __init__(
        self,
        d: DistanceMatrix,
        field: DensityField,
        n_hat: int,
        schedule: RadiusSchedule,
        true_curvature: Optional[np.ndarray] = None,
        threads: Optional[int] = None,
    ):
        if field.n_points != d.n_points:
            raise ValueError("density field and distance matrix sizes differ")
        settings = get_settings()
        self.d = d
        self.field = field
        self.n_hat = n_hat
        self.schedule = schedule
        self.true_curvature = true_curvature
        self.threads = threads or settings.threads
        self.block_size = settings.block_size
        self.truncated_count = 0

    def estimate(self, x: int, keep_ratios: bool = False) -> CurvatureReport:
        true_s = None if self.true_curvature is None else float(self.true_curvature[x])
        return estimate_scalar_curvature(self.d, self.field, x, self.schedule, self.n_hat, true_s, keep_ratios)

    def _estimate_block(self, block: np.ndarray) -> List[CurvatureReport]:
        return [self.estimate(int(x), keep_ratios=True) for x in block]

    def estimate_all(self, evaluation: Optional[EvaluationSet] = None, keep_ratios: bool = False) -> List[CurvatureReport]:
        """
        Estimate curvature at every evaluation point

        Args:
            evaluation: Points to report; all points when omitted
            keep_ratios: Attach the ratio sequence to each report

        Returns:
            Reports ordered by point index
        """
        if evaluation is None:
            evaluation = EvaluationSet.all(self.d.n_points)
        blocks = index_blocks(evaluation.indices, max(1, self.block_size // 8))

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            results = list(pool.map(self._estimate_block, blocks))

        reports = [report for block in results for report in block]
        self.truncated_count = self._warn_truncated(reports)
        if not keep_ratios:
            for report in reports:
                report.ratios = None
        logger.info(f"✅ Estimated curvature at {len(reports)} points ({self.threads} threads)")
        return reports

    def _warn_truncated(self, reports: List[CurvatureReport]) -> int:
        truncated: Dict[int, float] = {
            r.point_index: r.r_max_effective for r in reports if r.ratios is not None and r.ratios.truncated
        }
        if truncated:
            smallest = min(truncated.values())
            logger.warning(
                f"⚠️ r_max={self.schedule.r_max:g} exceeds the farthest neighbor at {len(truncated)} points; "
                f"schedules truncated (smallest effective r_max {smallest:.4g})"
            )
        return len(truncated)
