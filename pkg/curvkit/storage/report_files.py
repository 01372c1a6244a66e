"""
Result writers: curvature reports, ratio dumps, labels, profiles, summaries
"""

import csv
import json
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import numpy as np

from curvkit.exceptions import MetricFormatError
from curvkit.models.curvature import CurvatureReport
from curvkit.models.sample import LabeledSample
from curvkit.utils.helpers import format_float

PathLike = Union[str, Path]

REPORT_COLUMNS = ['point_index', 'n_hat', 'C_hat', 'S_hat', 'true_S']
RATIO_COLUMNS = ['point_index', 'radius', 'ratio']
LABEL_COLUMNS = ['index', 'true_S', 'true_density', 'in_evaluation_mask']


PROFILE_COLUMNS = ['bin_low', 'bin_high', 'count', 'mean_S_hat', 'mean_true_S']


def _open(path: PathLike):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, 'w', encoding='utf-8', newline='')


def _write_rows(path: PathLike, fieldnames: List[str], rows: Iterable[Dict[str, str]]) -> Path:
    with _open(path) as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, extrasaction='ignore', lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)
    return Path(path)


def _read_rows(path: PathLike, fieldnames: List[str], kind: str) -> List[Dict[str, str]]:
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != fieldnames:
            raise MetricFormatError(f"{path}: unexpected {kind} header {reader.fieldnames}")
        rows = list(reader)
    for line, row in enumerate(rows, start=2):
        if None in row or None in row.values():
            raise MetricFormatError(f"{path}:{line}: expected {len(fieldnames)} {kind} columns")
    return rows


def save_reports(reports: Iterable[CurvatureReport], path: PathLike) -> Path:
    """Write the per-point report CSV (true_S blank when unknown)"""
    return _write_rows(path, REPORT_COLUMNS, (
        {
            'point_index': str(report.point_index),
            'n_hat': str(report.n_hat),
            'C_hat': format_float(report.c_hat),
            'S_hat': format_float(report.s_hat),
            'true_S': format_float(report.true_s),
        }
        for report in reports
    ))


def save_ratios(reports: Iterable[CurvatureReport], path: PathLike) -> Path:
    """Long-form ratio dump: one line per (point, radius)"""
    return _write_rows(path, RATIO_COLUMNS, (
        {'point_index': str(report.point_index), 'radius': format_float(radius), 'ratio': format_float(ratio)}
        for report in reports if report.ratios is not None
        for radius, ratio in zip(report.ratios.radii, report.ratios.ratios)
    ))


def save_labels(sample: LabeledSample, path: PathLike) -> Path:
    mask = sample.evaluation_mask.mask(sample.n_points)
    return _write_rows(path, LABEL_COLUMNS, (
        {
            'index': str(i),
            'true_S': format_float(sample.true_curvature[i]),
            'true_density': format_float(sample.true_density[i]),
            'in_evaluation_mask': str(int(mask[i])),
        }
        for i in range(sample.n_points)
    ))


def load_labels(path: PathLike) -> Dict[str, np.ndarray]:
    """Read a labels CSV back into arrays keyed by column name"""
    rows = _read_rows(path, LABEL_COLUMNS, 'labels')
    try:
        return {
            'index': np.array([int(row['index']) for row in rows], dtype=np.int64),
            'true_S': np.array([float(row['true_S']) for row in rows], dtype=np.float64),
            'true_density': np.array([float(row['true_density']) for row in rows], dtype=np.float64),
            'in_evaluation_mask': np.array([row['in_evaluation_mask'] == '1' for row in rows], dtype=bool),
        }
    except ValueError as error:
        raise MetricFormatError(f"{path}: malformed labels CSV: {error}") from error


def save_profile(rows: List[Dict[str, float]], path: PathLike) -> Path:
    """Binned profile of estimated vs. true curvature along an intrinsic coordinate"""
    return _write_rows(path, PROFILE_COLUMNS, (
        {c: str(int(row[c])) if c == 'count' else format_float(row[c]) for c in PROFILE_COLUMNS}
        for row in rows
    ))


def save_json(payload: Union[dict, str], path: PathLike) -> Path:
    with _open(path) as f:
        if isinstance(payload, str):
            f.write(payload)
        else:
            json.dump(payload, f, indent=2, sort_keys=True)
        f.write('\n')
    return Path(path)


def load_reports(path: PathLike) -> List[Dict[str, Optional[float]]]:
    """Parse a reports CSV (used for summary recomputation)"""
    try:
        return [
            {
                'point_index': int(row['point_index']),
                'n_hat': int(row['n_hat']),
                'C_hat': float(row['C_hat']),
                'S_hat': float(row['S_hat']),
                'true_S': float(row['true_S']) if row['true_S'] else None,
            }
            for row in _read_rows(path, REPORT_COLUMNS, 'report')
        ]
    except ValueError as error:
        raise MetricFormatError(f"{path}: malformed report CSV: {error}") from error
