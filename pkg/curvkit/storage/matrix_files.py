"""
Distance-matrix and point-cloud file formats

CSV distance matrix: N lines of N comma-separated decimals, UTF-8, LF.
Binary distance matrix: b"DMAT", version byte 0x01, uint64 LE N, then the
N(N-1)/2 lower-triangle entries (row-major) as float64 LE.
Point cloud CSV: N lines of D decimals, optional '#' header.
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np

from curvkit.config.constants import DMAT_MAGIC, DMAT_VERSION, DistanceFormat
from curvkit.exceptions import MetricFormatError
from curvkit.models.metric import DistanceMatrix, EvaluationSet, PointCloud
from curvkit.utils.logger import logger

PathLike = Union[str, Path]

_HEADER_SIZE = len(DMAT_MAGIC) + 1 + 8


def infer_format(path: PathLike) -> DistanceFormat:
    """Guess the distance format from the file extension (.csv or anything else = binary)"""
    return DistanceFormat.CSV if str(path).lower().endswith('.csv') else DistanceFormat.BINARY


def load_distance_matrix(path: PathLike, format: Optional[DistanceFormat] = None,
                         strict: bool = False) -> DistanceMatrix:
    """
    Load and validate a distance matrix

    Args:
        path: File path
        format: csv or binary; inferred from the extension when omitted
        strict: Also run the sampled triangle-inequality check

    Returns:
        Validated DistanceMatrix
    """
    path = Path(path)
    if not path.exists():
        raise MetricFormatError(f"distance matrix file not found: {path}")
    format = DistanceFormat(format) if format is not None else infer_format(path)

    if format == DistanceFormat.CSV:
        matrix = _read_csv_matrix(path)
    else:
        matrix = _read_binary_matrix(path)

    logger.info(f"✅ Loaded {matrix.n_points}-point distance matrix from {path}")
    if strict:
        matrix.check_triangle()
    return matrix


def _read_csv_matrix(path: Path) -> DistanceMatrix:
    try:
        square = np.loadtxt(path, delimiter=',', dtype=np.float64, ndmin=2, encoding='utf-8')
    except ValueError as error:
        raise MetricFormatError(f"{path}: malformed CSV distance matrix: {error}") from error
    if square.shape[0] != square.shape[1]:
        raise MetricFormatError(f"{path}: expected N x N values, got {square.shape[0]} x {square.shape[1]}")
    return DistanceMatrix.from_square(square, source=str(path))


def _read_binary_matrix(path: Path) -> DistanceMatrix:
    raw = path.read_bytes()
    if len(raw) < _HEADER_SIZE or raw[:4] != DMAT_MAGIC:
        raise MetricFormatError(f"{path}: missing DMAT header")
    version = raw[4]
    if version != DMAT_VERSION:
        raise MetricFormatError(f"{path}: unsupported DMAT version {version}")
    n = int(np.frombuffer(raw, dtype='<u8', count=1, offset=5)[0])
    expected = n * (n - 1) // 2
    payload = len(raw) - _HEADER_SIZE
    if payload != 8 * expected:
        raise MetricFormatError(f"{path}: expected {expected} float64 entries for N={n}, found {payload / 8:g}")
    entries = np.frombuffer(raw, dtype='<f8', count=expected, offset=_HEADER_SIZE)
    return DistanceMatrix(n, entries.astype(np.float64))


def save_distance_matrix(matrix: DistanceMatrix, path: PathLike,
                         format: Optional[DistanceFormat] = None) -> Path:
    """Write a distance matrix; the binary form round-trips bit-exactly"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    format = DistanceFormat(format) if format is not None else infer_format(path)

    if format == DistanceFormat.CSV:
        square = matrix.to_square()
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            for row in square:
                f.write(','.join(repr(float(v)) for v in row) + '\n')
    else:
        header = DMAT_MAGIC + bytes([DMAT_VERSION]) + np.array([matrix.n_points], dtype='<u8').tobytes()
        with open(path, 'wb') as f:
            f.write(header)
            f.write(matrix.entries.astype('<f8').tobytes())

    logger.debug(f"Saved distance matrix ({format.value}) to {path}")
    return path


def load_point_cloud(path: PathLike) -> PointCloud:
    """Read an N x D point cloud CSV; lines starting with '#' are skipped"""
    path = Path(path)
    if not path.exists():
        raise MetricFormatError(f"point cloud file not found: {path}")
    try:
        coordinates = np.loadtxt(path, delimiter=',', comments='#', dtype=np.float64, ndmin=2, encoding='utf-8')
    except ValueError as error:
        raise MetricFormatError(f"{path}: malformed point cloud CSV: {error}") from error
    if coordinates.shape[0] < 1:
        raise MetricFormatError(f"{path}: empty point cloud")
    return PointCloud(coordinates)


def save_point_cloud(cloud: PointCloud, path: PathLike, header: bool = True) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        if header:
            f.write('# ' + ','.join(f'x{i}' for i in range(cloud.ambient_dim)) + '\n')
        for row in cloud.coordinates:
            f.write(','.join(repr(float(v)) for v in row) + '\n')
    return path


def load_mask(path: PathLike, n_points: Optional[int] = None) -> EvaluationSet:
    """Read evaluation indices, one integer per line ('#' comments allowed)"""
    path = Path(path)
    indices = []
    with open(path, 'r', encoding='utf-8') as f:
        for lineno, line in enumerate(f, start=1):
            text = line.split('#', 1)[0].strip()
            if not text:
                continue
            try:
                indices.append(int(text))
            except ValueError as error:
                raise MetricFormatError(f"{path}:{lineno}: expected an integer index, got '{text}'") from error
    return EvaluationSet(indices, n_points)


def save_mask(mask: EvaluationSet, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for index in mask:
            f.write(f'{index}\n')
    return path
