"""
Experiment service for running the curvature pipeline end to end
"""

from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np

from curvkit.config.constants import (
    FULL_SAMPLE_COUNT,
    DensitySource,
    DistanceMode,
    DistanceSource,
    geodesic_k_for,
)
from curvkit.config.settings import get_settings
from curvkit.engines.curvature_engine import CurvatureEngine
from curvkit.engines.density_engine import default_bandwidth, kde_density
from curvkit.engines.dimension_engine import levina_bickel
from curvkit.engines.geodesic_engine import geodesic_distances, shortest_path_distances
from curvkit.engines.metric_engine import pairwise_euclidean
from curvkit.exceptions import ConfigError, CurvkitError, StageError
from curvkit.models.curvature import CurvatureReport
from curvkit.models.experiment import ExperimentConfig, ExperimentResult, ExperimentSummary
from curvkit.models.metric import DistanceMatrix, EvaluationSet
from curvkit.models.sample import LabeledSample, NoiseSpec
from curvkit.models.stats import DensityField
from curvkit.services.histogram_service import emit_histogram
from curvkit.services.sampler_service import add_noise, sampler_service
from curvkit.storage import (
    load_distance_matrix,
    load_graph,
    load_mask,
    load_point_cloud,
    save_json,
    save_profile,
    save_ratios,
    save_reports,
)
from curvkit.utils.helpers import StageTimer
from curvkit.utils.logger import logger
from curvkit.utils.run_logger import ExperimentLogger

STAGES = ('sample', 'distances', 'dimension', 'density', 'curvature', 'output')
SIGN_THRESHOLD = 0.5
PROFILE_BINS = 20


def summarize(
    reports: Sequence[CurvatureReport],
    n_points: int,
    n_hat_sweep: Optional[Dict[int, int]] = None,
    true_dimension: Optional[int] = None,
    bandwidth: Optional[float] = None,
    sign_threshold: float = SIGN_THRESHOLD,
) -> ExperimentSummary:
    """
    Summary statistics of a run, computed from the reports alone

    Sign accuracy counts points with |true S| >= sign_threshold; the
    correlation is reported only when the true curvature varies.
    """
    if not reports:
        raise CurvkitError("no curvature reports to summarize")
    s_hat = np.array([r.s_hat for r in reports], dtype=np.float64)
    true_s = np.array([np.nan if r.true_s is None else r.true_s for r in reports], dtype=np.float64)

    sign_accuracy = None
    scored = np.abs(true_s) >= sign_threshold
    if np.any(scored):
        sign_accuracy = float(np.mean(np.sign(s_hat[scored]) == np.sign(true_s[scored])))

    correlation = None
    known = np.isfinite(true_s)
    if np.count_nonzero(known) > 1 and np.std(true_s[known]) > 0 and np.std(s_hat[known]) > 0:
        correlation = float(np.corrcoef(s_hat[known], true_s[known])[0, 1])

    return ExperimentSummary(
        n_points=n_points,
        n_evaluated=len(reports),
        n_hat=reports[0].n_hat,
        n_hat_sweep=n_hat_sweep or {},
        true_dimension=true_dimension,
        bandwidth=bandwidth,
        mean=float(np.mean(s_hat)),
        median=float(np.median(s_hat)),
        std=float(np.std(s_hat)),
        fraction_positive=float(np.mean(s_hat > 0)),
        fraction_negative=float(np.mean(s_hat < 0)),
        sign_accuracy=sign_accuracy,
        correlation=correlation,
    )


def curvature_profile(
    reports: Sequence[CurvatureReport],
    coordinate: np.ndarray,
    bins: int = PROFILE_BINS,
) -> List[Dict[str, float]]:
    """Mean estimated and true curvature binned along an intrinsic coordinate"""
    index = np.array([r.point_index for r in reports], dtype=np.int64)
    values = np.asarray(coordinate, dtype=np.float64)[index]
    s_hat = np.array([r.s_hat for r in reports], dtype=np.float64)
    true_s = np.array([np.nan if r.true_s is None else r.true_s for r in reports], dtype=np.float64)

    edges = np.linspace(values.min(), values.max(), bins + 1)
    which = np.clip(np.searchsorted(edges, values, side='right') - 1, 0, bins - 1)
    rows = []
    for b in range(bins):
        members = which == b
        count = int(members.sum())
        rows.append({
            'bin_low': float(edges[b]),
            'bin_high': float(edges[b + 1]),
            'count': count,
            'mean_S_hat': float(s_hat[members].mean()) if count else float('nan'),
            'mean_true_S': float(np.nanmean(true_s[members])) if count and np.any(np.isfinite(true_s[members]))
            else float('nan'),
        })
    return rows


class ExperimentService:
    """Runs configured experiments and writes their artifacts"""

    def __init__(self, experiment_logger: Optional[ExperimentLogger] = None):
        self.experiment_logger = experiment_logger or ExperimentLogger()

    @contextmanager
    def _stage(self, name: str, timer: StageTimer, run_name: str) -> Iterator[None]:
        logger.info(f"▶️ [{run_name}] {name}")
        try:
            with timer.stage(name):
                yield
        except Exception as error:
            logger.error(f"❌ [{run_name}] stage '{name}' failed: {error}")
            self.experiment_logger.log_run_failed(run_name, name, f"{type(error).__name__}: {error}")
            raise StageError(name, error) from error
        self.experiment_logger.log_stage(run_name, name, timer.stages[name])

    def run(
        self,
        config: ExperimentConfig,
        full: bool = False,
        output_dir: Optional[str] = None,
        write: bool = True,
    ) -> ExperimentResult:
        """
        Run one experiment

        Args:
            config: Validated experiment config
            full: Use the full sample size instead of the desk-scale default
            output_dir: Overrides config.output_dir and CURVKIT_OUTPUT_DIR
            write: Write reports.csv, summary.json, histogram.svg and friends

        Returns:
            ExperimentResult; deterministic given the config seed
        """
        timer = StageTimer()
        count = FULL_SAMPLE_COUNT if full and config.manifold is not None else config.count
        self.experiment_logger.log_run_start(config.name, config.seed, count if config.manifold else None)
        logger.info(f"🧪 Running experiment '{config.name}'")

        with self._stage('sample', timer, config.name):
            sample = self._load_sample(config, count)

        with self._stage('distances', timer, config.name):
            d = self._distances(config, sample)
            evaluation = self._evaluation_set(config, sample, d.n_points)

        with self._stage('dimension', timer, config.name):
            n_hat, sweep = self._dimension(config, d)

        with self._stage('density', timer, config.name):
            field = self._density(config, sample, d, n_hat)

        with self._stage('curvature', timer, config.name):
            truth = sample.true_curvature if sample is not None else None
            engine = CurvatureEngine(d, field, n_hat, config.radius_schedule, true_curvature=truth)
            reports = engine.estimate_all(evaluation, keep_ratios=config.dump_ratios)

        coordinate = sample.coordinate if sample is not None else None
        target = self._output_dir(config, output_dir)
        with self._stage('output', timer, config.name):
            summary = summarize(
                reports,
                n_points=d.n_points,
                n_hat_sweep=sweep,
                true_dimension=sample.dimension if sample is not None else None,
                bandwidth=field.bandwidth,
            )
            summary.truncated_schedules = engine.truncated_count
            if write:
                self._write_artifacts(config, reports, coordinate, target)

        summary.stage_seconds = dict(timer.stages)
        summary.total_seconds = timer.total
        if write:
            save_json(summary.model_dump_json(indent=2), target / 'summary.json')
            save_json(config.model_dump_json(indent=2), target / 'config.json')

        self.experiment_logger.log_run_end(config.name, summary.model_dump())
        logger.info(
            f"✅ [{config.name}] mean S_hat={summary.mean:.4g}, median={summary.median:.4g} "
            f"over {summary.n_evaluated} points in {summary.total_seconds:.1f}s"
        )
        return ExperimentResult(
            config=config,
            reports=reports,
            summary=summary,
            coordinate_name=sample.coordinate_name if sample is not None else None,
            coordinate=coordinate,
            output_dir=str(target) if write else None,
        )

    # Stages

    def _load_sample(self, config: ExperimentConfig, count: int) -> Optional[LabeledSample]:
        if config.manifold is None:
            return None
        params = sampler_service.parameters_for(config.manifold, config.manifold_dimension)
        sample = sampler_service.sample(config.manifold, count, config.seed, **params)
        if config.noise_sigma > 0:
            sample = add_noise(sample, NoiseSpec(sigma=config.noise_sigma, seed=config.seed + 1))
        return sample

    def _geodesic_k(self, config: ExperimentConfig) -> int:
        if config.geodesic_k is not None:
            return config.geodesic_k
        return geodesic_k_for(config.dimension or config.manifold_dimension)

    def _distances(self, config: ExperimentConfig, sample: Optional[LabeledSample]) -> DistanceMatrix:
        if sample is not None:
            if config.distance_mode == DistanceMode.EXACT:
                if sample.exact_distances is None:
                    raise ConfigError(f"{sample.manifold_tag.value} sample has no exact distances")
                return sample.exact_distances
            return geodesic_distances(sample.cloud, self._geodesic_k(config))
        if config.distance_path:
            return load_distance_matrix(config.distance_path, strict=config.strict)
        if config.cloud_path:
            d = geodesic_distances(load_point_cloud(config.cloud_path), self._geodesic_k(config))
        else:
            d = shortest_path_distances(load_graph(config.graph_path))
        if config.strict:
            d.check_triangle()
        return d

    def _evaluation_set(self, config: ExperimentConfig, sample: Optional[LabeledSample], n_points: int) -> EvaluationSet:
        if config.mask_path:
            return load_mask(config.mask_path, n_points)
        if sample is not None:
            return sample.evaluation_mask
        return EvaluationSet.all(n_points)

    def _dimension(self, config: ExperimentConfig, d: DistanceMatrix):
        if config.dimension is not None:
            logger.info(f"Using fixed dimension n_hat={config.dimension}")
            return config.dimension, {}
        k2_max = max([config.k2] + list(config.k2_sweep))
        k2_max = min(k2_max, d.n_points - 1)
        if config.k2 > k2_max:
            raise ConfigError(f"k2={config.k2} needs at least {config.k2 + 1} points, got {d.n_points}")
        estimate = levina_bickel(d, config.k1, k2_max)
        sweep = estimate.sweep([k for k in config.k2_sweep if k <= k2_max])
        return estimate.truncated(config.k2).n_hat, sweep

    def _density(self, config: ExperimentConfig, sample: Optional[LabeledSample], d: DistanceMatrix,
                 n_hat: int) -> DensityField:
        if config.density_source == DensitySource.ORACLE:
            return DensityField.from_truth(sample.true_density, n_hat)
        if config.density_source == DensitySource.EUCLIDEAN:
            cloud = sample.cloud if sample is not None else load_point_cloud(config.cloud_path)
            kernel_d = pairwise_euclidean(cloud)
            source = DistanceSource.EUCLIDEAN
        else:
            kernel_d = d
            source = DistanceSource.EXACT if config.distance_mode == DistanceMode.EXACT else DistanceSource.GRAPH
        bandwidth = config.bandwidth or default_bandwidth(kernel_d, n_hat)
        return kde_density(kernel_d, n_hat, config.kernel, bandwidth, distance_source=source,
                           leave_one_out=config.leave_one_out)

    # Output

    def _output_dir(self, config: ExperimentConfig, output_dir: Optional[str]) -> Path:
        if output_dir:
            return Path(output_dir)
        if config.output_dir:
            return Path(config.output_dir)
        return Path(get_settings().output_dir) / config.name

    def _write_artifacts(self, config: ExperimentConfig, reports: List[CurvatureReport],
                         coordinate: Optional[np.ndarray], target: Path):
        save_reports(reports, target / 'reports.csv')
        truth = [r.true_s for r in reports if r.true_s is not None]
        reference = float(np.median(truth)) if truth and np.ptp(truth) == 0 else None
        emit_histogram(
            [r.s_hat for r in reports],
            target / 'histogram.svg',
            bins=config.bins,
            log_log=config.log_log,
            title=config.name,
            reference=reference,
        )
        if config.dump_ratios:
            save_ratios(reports, target / 'ratios.csv')
        if coordinate is not None:
            save_profile(curvature_profile(reports, coordinate), target / 'profile.csv')
        logger.info(f"✅ Wrote results to {target}")


experiment_service = ExperimentService()


def run_experiment(config: ExperimentConfig, full: bool = False, output_dir: Optional[str] = None,
                   write: bool = True) -> ExperimentResult:
    return experiment_service.run(config, full=full, output_dir=output_dir, write=write)
