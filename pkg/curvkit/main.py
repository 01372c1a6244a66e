"""
curvkit command-line interface

Subcommands: sample, distances, estimate, experiment {run, accept, list}
"""

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from dotenv import load_dotenv

# Load .env before anything reads os.getenv (logger level, thread cap, output dir)
load_dotenv(dotenv_path=Path(os.getcwd()) / '.env')

from curvkit.config.constants import (  # noqa: E402
    DEFAULT_K1,
    DEFAULT_K2,
    DEFAULT_R_MIN,
    DensitySource,
    DistanceMode,
    KernelType,
    ManifoldTag,
)
from curvkit.config.presets import build_config, list_presets, resolve_config  # noqa: E402
from curvkit.engines.geodesic_engine import (  # noqa: E402
    geodesic_distances,
    knn_graph_from_cloud,
    shortest_path_distances,
)
from curvkit.exceptions import CurvkitError  # noqa: E402
from curvkit.models.sample import NoiseSpec  # noqa: E402
from curvkit.services.acceptance_service import acceptance_suite  # noqa: E402
from curvkit.services.experiment_service import run_experiment  # noqa: E402
from curvkit.services.sampler_service import add_noise, sampler_service  # noqa: E402
from curvkit.storage import (  # noqa: E402
    load_graph,
    load_mask,
    load_point_cloud,
    save_distance_matrix,
    save_json,
    save_labels,
    save_point_cloud,
    save_ratios,
    save_reports,
)
from curvkit.utils.logger import logger, setup_logging  # noqa: E402


def _optional_float(text: str) -> Optional[float]:
    return None if text == 'auto' else float(text)


def _optional_int(text: str) -> Optional[int]:
    return None if text == 'auto' else int(text)


# Commands

def cmd_sample(args: argparse.Namespace) -> int:
    params = sampler_service.parameters_for(args.manifold, args.dimension)
    sample = sampler_service.sample(args.manifold, args.count, args.seed, **params)
    if args.noise > 0:
        sample = add_noise(sample, NoiseSpec(sigma=args.noise, seed=args.seed + 1))

    out = Path(args.out)
    save_point_cloud(sample.cloud, out / 'cloud.csv')
    save_labels(sample, out / 'labels.csv')
    if sample.exact_distances is not None:
        save_distance_matrix(sample.exact_distances, out / 'distances.dmat')
    print(f"{sample.n_points} points written to {out}")
    return 0


def cmd_distances(args: argparse.Namespace) -> int:
    if args.cloud:
        graph_source = load_point_cloud(args.cloud)
    else:
        graph_source = load_graph(args.graph)

    if args.sources == 'all':
        if args.cloud:
            d = geodesic_distances(graph_source, args.k)
        else:
            d = shortest_path_distances(graph_source, k=args.k)
        if args.strict:
            d.check_triangle()
        save_distance_matrix(d, args.out)
        print(f"{d.n_points}-point geodesic distance matrix written to {args.out}")
        return 0

    # A source subset gives a rectangular block, written as CSV rows
    if args.cloud:
        graph_source = knn_graph_from_cloud(graph_source, args.k)
    sources = load_mask(args.sources, graph_source.n_nodes)
    rows = shortest_path_distances(graph_source, sources=sources, k=args.k)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(out, rows, delimiter=',', fmt='%.17g')
    print(f"{rows.shape[0]} x {rows.shape[1]} geodesic distances written to {out}")
    return 0


def cmd_estimate(args: argparse.Namespace) -> int:
    fields = {
        'name': 'estimate',
        'distance_path': args.distances,
        'cloud_path': args.cloud,
        'graph_path': args.graph,
        'mask_path': args.mask,
        'distance_mode': DistanceMode.GRAPH if (args.cloud or args.graph) else DistanceMode.EXACT,
        'geodesic_k': args.geodesic_k,
        'k1': args.k1,
        'k2': args.k2,
        'k2_sweep': [],
        'dimension': args.dimension,
        'kernel': args.kernel,
        'bandwidth': args.bandwidth,
        'density_source': args.density_distances,
        'leave_one_out': args.leave_one_out,
        'r_min': args.r_min,
        'r_max': args.r_max,
        'schedule': args.schedule,
        'dump_ratios': bool(args.dump_ratios),
        'strict': args.strict,
    }
    config = build_config(**{k: v for k, v in fields.items() if v is not None})
    result = run_experiment(config, write=False)

    save_reports(result.reports, args.out)
    if args.dump_ratios:
        save_ratios(result.reports, args.dump_ratios)
    summary = result.summary
    print(f"n_hat={summary.n_hat} mean={summary.mean:.6g} median={summary.median:.6g} "
          f"points={summary.n_evaluated} -> {args.out}")
    return 0


def cmd_experiment_run(args: argparse.Namespace) -> int:
    config = resolve_config(args.config, kernel=args.kernel, count=args.count, seed=args.seed)
    result = run_experiment(config, full=args.full, output_dir=args.output_dir)
    print(result.summary.model_dump_json(indent=2))
    return 0


def cmd_experiment_accept(args: argparse.Namespace) -> int:
    report = acceptance_suite(args.presets, count=args.count, seed=args.seed, full=args.full)
    payload = {
        'passed': report.passed,
        'results': [r.model_dump() for r in report.results],
    }
    if args.out:
        save_json(payload, args.out)
    print(json.dumps(payload, indent=2))
    for failure in report.failures:
        logger.warning(f"⚠️ FAILED {failure.name} [{failure.preset or '-'}]: {failure.error or failure.threshold}")
    return 0 if report.passed else 1


def cmd_experiment_list(args: argparse.Namespace) -> int:
    for name in list_presets():
        print(name)
    return 0


# Parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='curvkit', description='Scalar curvature estimation from distance matrices')
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='overrides LOG_LEVEL')
    commands = parser.add_subparsers(dest='command', required=True)

    sample = commands.add_parser('sample', help='draw a labeled synthetic sample')
    sample.add_argument('manifold', choices=[m.value for m in ManifoldTag])
    sample.add_argument('--count', type=int, default=4000)
    sample.add_argument('--seed', type=int, default=0)
    sample.add_argument('--dimension', type=int, default=2, help='sphere dimension')
    sample.add_argument('--noise', type=float, default=0.0, help='Gaussian noise sigma on ambient coordinates')
    sample.add_argument('--out', required=True, help='output directory')
    sample.set_defaults(handler=cmd_sample)

    distances = commands.add_parser('distances', help='geodesic distances from a k-NN graph')
    source = distances.add_mutually_exclusive_group(required=True)
    source.add_argument('--cloud', help='point cloud CSV')
    source.add_argument('--graph', help='edge-list file')
    distances.add_argument('--k', type=int, default=20)
    distances.add_argument('--sources', default='all', help="'all' or an index mask file")
    distances.add_argument('--out', required=True)
    distances.add_argument('--strict', action='store_true', help='check the triangle inequality on random triples')
    distances.set_defaults(handler=cmd_distances)

    estimate = commands.add_parser('estimate', help='per-point scalar curvature')
    data = estimate.add_mutually_exclusive_group(required=True)
    data.add_argument('--distances', help='distance matrix (CSV or DMAT)')
    data.add_argument('--cloud', help='point cloud CSV; geodesics from a k-NN graph')
    data.add_argument('--graph', help='edge-list file')
    estimate.add_argument('--geodesic-k', type=int)
    estimate.add_argument('--kernel', choices=[KernelType.GAUSSIAN.value, KernelType.BIWEIGHT.value],
                          default=KernelType.GAUSSIAN.value)
    estimate.add_argument('--bandwidth', type=_optional_float, default=None, help="real or 'auto'")
    estimate.add_argument('--density-distances', choices=[DensitySource.GEODESIC.value, DensitySource.EUCLIDEAN.value],
                          default=DensitySource.GEODESIC.value)
    estimate.add_argument('--leave-one-out', action='store_true', help="drop each point's own kernel term")
    estimate.add_argument('--k1', type=int, default=DEFAULT_K1)
    estimate.add_argument('--k2', type=int, default=DEFAULT_K2)
    estimate.add_argument('--dimension', type=_optional_int, default=None, help="integer or 'auto'")
    estimate.add_argument('--r-min', type=float, default=DEFAULT_R_MIN)
    estimate.add_argument('--r-max', type=float, required=True)
    estimate.add_argument('--schedule', default='nn', help="'nn' or 'grid:<spacing>'")
    estimate.add_argument('--mask', help='evaluation index file')
    estimate.add_argument('--out', default='reports.csv')
    estimate.add_argument('--dump-ratios', metavar='PATH', help='write per-point ratio sequences')
    estimate.add_argument('--strict', action='store_true')
    estimate.set_defaults(handler=cmd_estimate)

    experiment = commands.add_parser('experiment', help='presets and acceptance checks')
    actions = experiment.add_subparsers(dest='action', required=True)

    run = actions.add_parser('run', help='run a preset or a JSON config')
    run.add_argument('config', help='preset name or config.json')
    run.add_argument('--full', action='store_true', help='full-size sample')
    run.add_argument('--kernel', choices=[k.value for k in KernelType])
    run.add_argument('--count', type=int)
    run.add_argument('--seed', type=int)
    run.add_argument('--output-dir')
    run.set_defaults(handler=cmd_experiment_run)

    accept = actions.add_parser('accept', help='score the acceptance criteria')
    accept.add_argument('presets', nargs='*', help='presets to score (default: all)')
    accept.add_argument('--count', type=int)
    accept.add_argument('--seed', type=int)
    accept.add_argument('--full', action='store_true')
    accept.add_argument('--out', help='write the JSON report here')
    accept.set_defaults(handler=cmd_experiment_accept)

    listing = actions.add_parser('list', help='list presets')
    listing.set_defaults(handler=cmd_experiment_list)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    if args.log_level:
        setup_logging(level=args.log_level)
    if getattr(args, 'presets', None) == []:
        args.presets = None
    try:
        return args.handler(args)
    except CurvkitError as error:
        logger.error(f"❌ {error}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
