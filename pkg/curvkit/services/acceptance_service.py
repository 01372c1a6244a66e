"""
Acceptance service: pass/fail checks of the estimator against ground truth
"""

import math
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from curvkit.config.constants import KernelType
from curvkit.config.presets import preset
from curvkit.engines import curvature_engine
from curvkit.engines.dimension_engine import levina_bickel
from curvkit.engines.geodesic_engine import floyd_warshall_distances, shortest_path_distances
from curvkit.engines.metric_engine import pairwise_euclidean
from curvkit.exceptions import ScheduleError
from curvkit.models.curvature import RadiusSchedule
from curvkit.models.experiment import AcceptanceReport, CriterionResult, ExperimentResult
from curvkit.models.graph import WeightedGraph
from curvkit.models.metric import PointCloud
from curvkit.models.stats import DensityField
from curvkit.services.experiment_service import run_experiment
from curvkit.services.manifold_samplers import SphereSampler
from curvkit.utils.helpers import make_rng
from curvkit.utils.logger import logger

# Medians of S_hat: preset -> (target, tolerance, runtime limit in seconds)
EXACT_SURFACES = {
    'sphere2-exact': (2.0, 0.5, 180.0),
    'euclidean-disk-exact': (0.0, 0.5, 180.0),
    'poincare-disk-exact': (-2.0, 0.75, 180.0),
}
GRAPH_SURFACES = {
    'sphere2-graph': (2.0, 0.75, 300.0),
    'euclidean-disk-graph': (0.0, 0.75, 300.0),
}
# Fraction of points with S_hat > 0 required on higher spheres
HIGHER_SPHERES = {
    'sphere3-exact': 0.95,
    'sphere5-exact': 0.90,
    'sphere7-exact': 0.90,
}
NOISY_SPHERES = ['sphere2-noise-0.001', 'sphere2-noise-0.003', 'sphere2-noise-0.01', 'sphere2-noise-0.03']
DIMENSION_PRESETS = [
    'sphere2-exact', 'euclidean-disk-exact', 'poincare-disk-exact',
    'sphere3-exact', 'sphere5-exact', 'sphere7-exact', 'torus', 'hyperboloid',
]
ORACLE_ANCHOR = 'sphere2-exact'

DEFAULT_PRESETS = list(dict.fromkeys(
    list(EXACT_SURFACES) + list(GRAPH_SURFACES) + list(HIGHER_SPHERES)
    + ['torus', 'hyperboloid'] + NOISY_SPHERES + DIMENSION_PRESETS
))


# Monte-Carlo and oracle checks

def _north_pole_row(points: np.ndarray) -> np.ndarray:
    """Distances from the north pole (index 0) to itself and every sampled point"""
    pole = np.zeros(points.shape[1])
    pole[-1] = 1.0
    return np.concatenate(([0.0], np.arccos(np.clip(points @ pole, -1.0, 1.0))))


def ball_volume_unbiasedness(
    n_points: int = 500,
    resamples: int = 2000,
    r: float = 0.5,
    seed: int = 0,
) -> Dict[str, float]:
    """
    Mean of the ball-volume estimate on S^2 with the true density injected,
    centered at a fixed point, against the cap volume 2 pi (1 - cos r)
    """
    sampler = SphereSampler(2)
    inv_density = np.full(n_points, sampler.volume)
    rng = make_rng(seed)
    volumes = np.empty(resamples)
    for i in range(resamples):
        draws = rng.standard_normal((n_points - 1, 3))
        row = _north_pole_row(draws / np.linalg.norm(draws, axis=1, keepdims=True))
        volumes[i] = curvature_engine.ball_volume_from_row(row, 0, inv_density, r)
    mean = float(volumes.mean())
    standard_error = float(volumes.std(ddof=1) / math.sqrt(resamples))
    truth = sampler.ball_volume(r)
    return {
        'mean_volume': mean,
        'true_volume': truth,
        'standard_error': standard_error,
        'z_score': abs(mean - truth) / standard_error,
    }


def ratio_variance_scaling(
    radii: Sequence[float] = (0.2, 0.4, 0.8),
    sizes: Sequence[int] = (1000, 4000),
    resamples: int = 200,
    seed: int = 0,
) -> Dict[str, float]:
    """var(y) * N * r^2 on S^2 with the true density, for every (r, N) pair"""
    sampler = SphereSampler(2)
    rng = make_rng(seed)
    measured = {}
    for n_points in sizes:
        inv_density = np.full(n_points, sampler.volume)
        ratios = {r: np.empty(resamples) for r in radii}
        for i in range(resamples):
            draws = rng.standard_normal((n_points - 1, 3))
            row = _north_pole_row(draws / np.linalg.norm(draws, axis=1, keepdims=True))
            for r in radii:
                volume = curvature_engine.ball_volume_from_row(row, 0, inv_density, r)
                ratios[r][i] = volume / curvature_engine.euclidean_ball_volume(2, r)
        for r in radii:
            measured[f'N={n_points},r={r:g}'] = float(np.var(ratios[r], ddof=1) * n_points * r ** 2)
    values = list(measured.values())
    measured['spread'] = max(values) / min(values)
    return measured


def _random_graph(rng: np.random.Generator, n_nodes: int) -> WeightedGraph:
    """Connected graph: random spanning tree plus extra edges, integer weights"""
    parents = [int(rng.integers(0, i)) for i in range(1, n_nodes)]
    edges = {(min(p, i), max(p, i)) for i, p in zip(range(1, n_nodes), parents)}
    for _ in range(2 * n_nodes):
        a, b = (int(v) for v in rng.choice(n_nodes, size=2, replace=False))
        edges.add((min(a, b), max(a, b)))
    pairs = np.array(sorted(edges), dtype=np.int64)
    weights = rng.integers(1, 10, size=len(pairs)).astype(np.float64)
    return WeightedGraph(n_nodes, pairs[:, 0], pairs[:, 1], weights)


def _random_instance(rng: np.random.Generator):
    """Random planar metric, positive densities, center and nearest-neighbor schedule"""
    n_points = int(rng.integers(10, 60))
    d = pairwise_euclidean(PointCloud(rng.random((n_points, 2))))
    field = DensityField(values=rng.uniform(0.5, 2.0, n_points), kernel=KernelType.GAUSSIAN, dimension=2)
    x = int(rng.integers(0, n_points))
    schedule = RadiusSchedule(r_min=0.0, r_max=float(rng.uniform(0.3, 1.5)))
    return d, field, x, schedule


def oracle_equivalence(
    graphs: int = 50,
    graph_nodes: int = 50,
    instances: int = 100,
    seed: int = 0,
) -> Dict[str, float]:
    """Dijkstra vs Floyd-Warshall, incremental vs direct ratios, and both volume forms"""
    rng = make_rng(seed)
    graph_mismatches = 0
    for _ in range(graphs):
        graph = _random_graph(rng, graph_nodes)
        dijkstra = shortest_path_distances(graph, threads=1).to_square()
        if not np.array_equal(dijkstra, floyd_warshall_distances(graph)):
            graph_mismatches += 1

    ratio_mismatches = 0
    worst_relative = 0.0
    for _ in range(instances):
        d, field, x, schedule = _random_instance(rng)
        outcomes = []
        for method in (curvature_engine.ratio_sequence, curvature_engine.ratio_sequence_direct):
            try:
                outcomes.append(method(d, field, x, schedule, 2))
            except ScheduleError:
                outcomes.append(None)
        fast, slow = outcomes
        if fast is None or slow is None:
            ratio_mismatches += int((fast is None) != (slow is None))
        elif not (np.array_equal(fast.radii, slow.radii) and np.array_equal(fast.ratios, slow.ratios)):
            ratio_mismatches += 1

        r = float(rng.uniform(0.0, 1.0))
        estimate = curvature_engine.estimate_ball_volume(d, field, x, r)
        other = curvature_engine.volume_from_mean_density(estimate, d.n_points)
        if estimate.volume > 0:
            worst_relative = max(worst_relative, abs(other - estimate.volume) / estimate.volume)
        elif other != 0:
            worst_relative = math.inf
    return {
        'graph_mismatches': float(graph_mismatches),
        'ratio_mismatches': float(ratio_mismatches),
        'volume_form_relative_error': worst_relative,
    }


class AcceptanceService:
    """Runs presets once and scores every criterion whose presets were requested"""

    def __init__(self, count: Optional[int] = None, seed: Optional[int] = None, full: bool = False):
        self.count = count
        self.seed = seed
        self.full = full
        self.results: Dict[str, ExperimentResult] = {}
        self.runtimes: Dict[str, float] = {}
        self.criteria: List[Tuple[str, Callable[[List[str]], List[CriterionResult]]]] = [
            ('constant-curvature-exact', self._constant_curvature_exact),
            ('constant-curvature-graph', self._constant_curvature_graph),
            ('higher-spheres', self._higher_spheres),
            ('non-constant-curvature', self._non_constant_curvature),
            ('noisy-sphere', self._noisy_sphere),
            ('ball-volume-unbiasedness', self._unbiasedness),
            ('ratio-variance-scaling', self._variance_scaling),
            ('oracle-equivalence', self._oracle_equivalence),
            ('dimension', self._dimension),
            ('exact-arithmetic', self._exact_arithmetic),
        ]

    def _result(self, name: str) -> ExperimentResult:
        if name not in self.results:
            config = preset(name, count=self.count, seed=self.seed)
            started = time.perf_counter()
            self.results[name] = run_experiment(config, full=self.full, write=False)
            self.runtimes[name] = time.perf_counter() - started
        return self.results[name]

    def run(self, presets: Sequence[str]) -> AcceptanceReport:
        """
        Score the criteria anchored to the given presets

        Args:
            presets: Preset names; an empty list gives an empty report

        Returns:
            AcceptanceReport; a failing or crashing criterion is recorded, never raised
        """
        requested = list(dict.fromkeys(presets))
        report = AcceptanceReport()
        for name, check in self.criteria:
            try:
                results = check(requested)
            except Exception as error:
                logger.error(f"❌ Criterion '{name}' crashed: {error}")
                results = [CriterionResult(name=name, passed=False, error=f"{type(error).__name__}: {error}")]
            for result in results:
                status = '✅' if result.passed else '❌'
                logger.info(f"{status} {result.name} [{result.preset or '-'}] {result.measured}")
            report.results.extend(results)
        return report

    def _guarded(self, name: str, preset_name: str, body: Callable[[], CriterionResult]) -> CriterionResult:
        try:
            return body()
        except Exception as error:
            logger.error(f"❌ {name} [{preset_name}] failed: {error}")
            return CriterionResult(name=name, preset=preset_name, passed=False,
                                   error=f"{type(error).__name__}: {error}")

    def _median_checks(self, name: str, table: Dict[str, Tuple[float, float, float]],
                       requested: List[str]) -> List[CriterionResult]:
        out = []
        for preset_name, (target, tolerance, limit) in table.items():
            if preset_name not in requested:
                continue

            def body(preset_name=preset_name, target=target, tolerance=tolerance, limit=limit):
                median = self._result(preset_name).summary.median
                runtime = self.runtimes[preset_name]
                return CriterionResult(
                    name=name, preset=preset_name,
                    passed=abs(median - target) <= tolerance and runtime < limit,
                    measured={'median': median, 'runtime_seconds': runtime},
                    threshold=f"|median - {target:g}| <= {tolerance:g}, runtime < {limit:g}s",
                )
            out.append(self._guarded(name, preset_name, body))
        return out

    def _constant_curvature_exact(self, requested):
        return self._median_checks('constant-curvature-exact', EXACT_SURFACES, requested)

    def _constant_curvature_graph(self, requested):
        return self._median_checks('constant-curvature-graph', GRAPH_SURFACES, requested)

    def _higher_spheres(self, requested):
        out = []
        for preset_name, needed in HIGHER_SPHERES.items():
            if preset_name not in requested:
                continue

            def body(preset_name=preset_name, needed=needed):
                summary = self._result(preset_name).summary
                measured = {'fraction_positive': summary.fraction_positive, 'median': summary.median}
                passed = summary.fraction_positive >= needed
                threshold = f"fraction_positive >= {needed:g}"
                if preset_name == 'sphere3-exact':
                    passed = passed and abs(summary.median - 6.0) <= 0.35 * 6.0
                    threshold += ", |median - 6| <= 35%"
                return CriterionResult(name='higher-spheres', preset=preset_name, passed=passed,
                                       measured=measured, threshold=threshold)
            out.append(self._guarded('higher-spheres', preset_name, body))
        return out

    def _non_constant_curvature(self, requested):
        out = []
        if 'torus' in requested:
            def torus():
                summary = self._result('torus').summary
                accuracy = summary.sign_accuracy if summary.sign_accuracy is not None else 0.0
                correlation = summary.correlation if summary.correlation is not None else 0.0
                return CriterionResult(
                    name='non-constant-curvature', preset='torus',
                    passed=accuracy >= 0.8 and correlation >= 0.6,
                    measured={'sign_accuracy': accuracy, 'correlation': correlation},
                    threshold="sign accuracy (|S| >= 0.5) >= 0.8, correlation >= 0.6",
                )
            out.append(self._guarded('non-constant-curvature', 'torus', torus))
        if 'hyperboloid' in requested:
            def hyperboloid():
                summary = self._result('hyperboloid').summary
                return CriterionResult(
                    name='non-constant-curvature', preset='hyperboloid',
                    passed=summary.fraction_negative >= 0.8,
                    measured={'fraction_negative': summary.fraction_negative},
                    threshold="fraction_negative >= 0.8",
                )
            out.append(self._guarded('non-constant-curvature', 'hyperboloid', hyperboloid))
        return out

    def _noisy_sphere(self, requested):
        out = []
        for preset_name in NOISY_SPHERES:
            if preset_name not in requested:
                continue

            def body(preset_name=preset_name):
                mean = self._result(preset_name).summary.mean
                return CriterionResult(name='noisy-sphere', preset=preset_name, passed=mean > 0,
                                       measured={'mean': mean}, threshold="mean > 0")
            out.append(self._guarded('noisy-sphere', preset_name, body))
        return out

    def _anchored(self, name: str, requested, body: Callable[[], CriterionResult]) -> List[CriterionResult]:
        if ORACLE_ANCHOR not in requested:
            return []
        return [self._guarded(name, ORACLE_ANCHOR, body)]

    def _unbiasedness(self, requested):
        def body():
            started = time.perf_counter()
            measured = ball_volume_unbiasedness(seed=self.seed or 0)
            measured['runtime_seconds'] = time.perf_counter() - started
            return CriterionResult(
                name='ball-volume-unbiasedness', preset=ORACLE_ANCHOR,
                passed=measured['z_score'] <= 3.0 and measured['runtime_seconds'] < 60.0,
                measured=measured, threshold="within 3 standard errors, runtime < 60s",
            )
        return self._anchored('ball-volume-unbiasedness', requested, body)

    def _variance_scaling(self, requested):
        def body():
            measured = ratio_variance_scaling(seed=self.seed or 0)
            return CriterionResult(
                name='ratio-variance-scaling', preset=ORACLE_ANCHOR,
                passed=measured['spread'] <= 4.0,
                measured=measured, threshold="max/min of var(y) N r^2 <= 4",
            )
        return self._anchored('ratio-variance-scaling', requested, body)

    def _oracle_equivalence(self, requested):
        def body():
            measured = oracle_equivalence(seed=self.seed or 0)
            return CriterionResult(
                name='oracle-equivalence', preset=ORACLE_ANCHOR,
                passed=(measured['graph_mismatches'] == 0 and measured['ratio_mismatches'] == 0
                        and measured['volume_form_relative_error'] <= 1e-12),
                measured=measured, threshold="exact agreement; volume forms within 1e-12",
            )
        return self._anchored('oracle-equivalence', requested, body)

    def _dimension(self, requested):
        out = []
        for preset_name in DIMENSION_PRESETS:
            if preset_name not in requested:
                continue

            def body(preset_name=preset_name):
                summary = self._result(preset_name).summary
                wrong = {str(k): float(v) for k, v in summary.n_hat_sweep.items() if v != summary.true_dimension}
                return CriterionResult(
                    name='dimension', preset=preset_name,
                    passed=bool(summary.n_hat_sweep) and not wrong and summary.n_hat == summary.true_dimension,
                    measured={'n_hat': float(summary.n_hat), 'true_dimension': float(summary.true_dimension or 0),
                              **{f'k2={k}': v for k, v in wrong.items()}},
                    threshold="n_hat equals the true dimension for every k2 in the sweep",
                )
            out.append(self._guarded('dimension', preset_name, body))
        return out

    def _exact_arithmetic(self, requested):
        def body():
            result = self._result(ORACLE_ANCHOR)
            identity = all(r.s_hat == -6.0 * (r.n_hat + 2) * r.c_hat for r in result.reports)

            radii = np.linspace(0.01, 1.0, 100)
            flat = curvature_engine.fit_quadratic_coefficient(radii, np.ones_like(radii), 0.0, 1.0)

            config = result.config
            sample = SphereSampler(config.manifold_dimension).sample(min(config.count, 1000), config.seed)
            d = sample.exact_distances
            once = levina_bickel(d, config.k1, config.k2)
            twice = levina_bickel(d.scaled(2.0), config.k1, config.k2)
            invariant = once.raw_values == twice.raw_values and once.n_hat == twice.n_hat
            return CriterionResult(
                name='exact-arithmetic', preset=ORACLE_ANCHOR,
                passed=identity and flat == 0.0 and invariant,
                measured={'identity': float(identity), 'flat_c_hat': flat, 'scale_invariant': float(invariant)},
                threshold="S = -6(n+2)C exactly; C = 0 for flat ratios; n_hat unchanged under d -> 2d",
            )
        return self._anchored('exact-arithmetic', requested, body)


def acceptance_suite(
    presets: Optional[Sequence[str]] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
    full: bool = False,
) -> AcceptanceReport:
    """Score the acceptance criteria; presets defaults to every preset a criterion uses"""
    presets = DEFAULT_PRESETS if presets is None else presets
    return AcceptanceService(count=count, seed=seed, full=full).run(presets)
