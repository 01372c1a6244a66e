"""
Tests for distance matrices, point clouds, ball counts and their file formats
Run with: pytest test_metric_core.py
"""

import itertools

import numpy as np
import pytest

from curvkit.engines.metric_engine import ball_count, pairwise_euclidean
from curvkit.exceptions import MetricFormatError, MetricValidationError
from curvkit.models.metric import DistanceMatrix, EvaluationSet, PointCloud
from curvkit.storage import (
    load_distance_matrix,
    load_mask,
    load_point_cloud,
    save_distance_matrix,
    save_mask,
    save_point_cloud,
)


def write_csv(path, rows):
    path.write_text('\n'.join(','.join(repr(float(v)) for v in row) for row in rows) + '\n', encoding='utf-8')
    return path


def test_load_csv_direct_read(tmp_path):
    path = write_csv(tmp_path / 'd.csv', [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    d = load_distance_matrix(path)
    assert d.n_points == 3
    assert d[0, 2] == 2.0
    assert d[2, 0] == 2.0
    assert d[1, 1] == 0.0


def test_load_csv_duplicates_warn_but_load(tmp_path, caplog_loguru):
    path = write_csv(tmp_path / 'zeros.csv', np.zeros((3, 3)))
    d = load_distance_matrix(path)
    assert d.n_points == 3
    assert np.all(d.entries == 0.0)
    assert any('duplicate' in message for message in caplog_loguru)


def test_load_csv_symmetrizes_small_asymmetry(tmp_path, caplog_loguru):
    path = write_csv(tmp_path / 'asym.csv', [[0, 1.0], [1.000000001, 0]])
    d = load_distance_matrix(path)
    assert d[0, 1] == pytest.approx(1.0000000005, rel=0, abs=1e-15)
    assert any('symmetrizing' in message for message in caplog_loguru)


@pytest.mark.parametrize('rows, match', [
    ([[0, -1], [-1, 0]], 'negative'),
    ([[0.5, 1], [1, 0]], 'diagonal'),
    ([[0.0]], 'N >= 2'),
])
def test_load_csv_rejects_invalid_matrices(tmp_path, rows, match):
    path = write_csv(tmp_path / 'bad.csv', rows)
    with pytest.raises(MetricValidationError, match=match):
        load_distance_matrix(path)


def test_load_csv_rejects_ragged_and_missing_files(tmp_path):
    ragged = tmp_path / 'ragged.csv'
    ragged.write_text('0,1,2\n1,0\n', encoding='utf-8')
    with pytest.raises(MetricFormatError):
        load_distance_matrix(ragged)
    with pytest.raises(MetricFormatError, match='not found'):
        load_distance_matrix(tmp_path / 'missing.csv')


def test_binary_round_trip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(3)
    d = pairwise_euclidean(PointCloud(rng.random((40, 3))))
    path = save_distance_matrix(d, tmp_path / 'd.dmat')
    again = load_distance_matrix(path)
    assert again == d
    assert again.entries.tobytes() == d.entries.tobytes()


def test_binary_header_layout(tmp_path):
    d = DistanceMatrix(3, np.array([1.0, 2.0, 3.0]))
    raw = save_distance_matrix(d, tmp_path / 'd.bin').read_bytes()
    assert raw[:4] == b'DMAT'
    assert raw[4] == 1
    assert int.from_bytes(raw[5:13], 'little') == 3
    assert np.frombuffer(raw[13:], dtype='<f8').tolist() == [1.0, 2.0, 3.0]


def test_binary_rejects_truncated_payload(tmp_path):
    d = DistanceMatrix(4, np.arange(1.0, 7.0))
    raw = save_distance_matrix(d, tmp_path / 'd.dmat').read_bytes()
    (tmp_path / 'short.dmat').write_bytes(raw[:-8])
    with pytest.raises(MetricFormatError, match='expected 6'):
        load_distance_matrix(tmp_path / 'short.dmat')
    (tmp_path / 'magic.dmat').write_bytes(b'XXXX' + raw[4:])
    with pytest.raises(MetricFormatError, match='header'):
        load_distance_matrix(tmp_path / 'magic.dmat')


def test_csv_round_trip(tmp_path):
    d = DistanceMatrix.from_square(np.array([[0, 1.5, 2.25], [1.5, 0, 0.75], [2.25, 0.75, 0]]))
    again = load_distance_matrix(save_distance_matrix(d, tmp_path / 'd.csv'))
    assert again == d


def test_triangular_storage_views():
    square = np.array([
        [0.0, 1.0, 2.0, 3.0],
        [1.0, 0.0, 4.0, 5.0],
        [2.0, 4.0, 0.0, 6.0],
        [3.0, 5.0, 6.0, 0.0],
    ])
    d = DistanceMatrix.from_square(square)
    assert d.entries.tolist() == [1.0, 2.0, 4.0, 3.0, 5.0, 6.0]
    assert np.array_equal(d.to_square(), square)
    assert np.array_equal(d.row(2), square[2])
    assert np.array_equal(d.rows([3, 0]), square[[3, 0]])
    distances, order = d.sorted_row(1)
    assert distances.tolist() == [1.0, 4.0, 5.0]
    assert order.tolist() == [0, 2, 3]
    with pytest.raises(MetricValidationError):
        d.row(4)


def test_sorted_row_breaks_ties_by_index():
    d = DistanceMatrix.from_square(np.array([
        [0.0, 1.0, 1.0, 1.0],
        [1.0, 0.0, 2.0, 2.0],
        [1.0, 2.0, 0.0, 2.0],
        [1.0, 2.0, 2.0, 0.0],
    ]))
    _, order = d.sorted_row(0)
    assert order.tolist() == [1, 2, 3]


def test_pairwise_euclidean_345():
    d = pairwise_euclidean(PointCloud([[0.0, 0.0], [3.0, 4.0]]))
    assert d[0, 1] == 5.0


def test_pairwise_euclidean_repeated_point():
    d = pairwise_euclidean(PointCloud([[1.0, 2.0], [1.0, 2.0]]))
    assert d[0, 1] == 0.0


def test_pairwise_euclidean_is_a_metric_on_all_triples():
    rng = np.random.default_rng(0)
    d = pairwise_euclidean(PointCloud(rng.random((100, 3))), block_size=17)
    square = d.to_square()
    assert np.array_equal(square, square.T)
    for i, j, k in itertools.combinations(range(0, 100, 7), 3):
        assert square[i, k] <= square[i, j] + square[j, k] + 1e-12
        assert square[i, j] <= square[i, k] + square[k, j] + 1e-12
    assert d.check_triangle(samples=5000) == 0


def test_pairwise_euclidean_refuses_a_chart():
    with pytest.raises(MetricValidationError, match='chart'):
        pairwise_euclidean(PointCloud([[0.1, 0.0], [0.2, 0.0]], embedded=False))


def test_check_triangle_counts_violations():
    d = DistanceMatrix.from_square(np.array([[0, 1, 10], [1, 0, 1], [10, 1, 0]], dtype=float))
    assert d.check_triangle(samples=2000, rng=np.random.default_rng(1)) > 0


def test_ball_count_examples():
    d = DistanceMatrix.from_square(np.array([
        [0, 1, 2, 3],
        [1, 0, 1, 2],
        [2, 1, 0, 1],
        [3, 2, 1, 0],
    ], dtype=float))
    assert ball_count(d, 0, 2.0) == 2
    assert ball_count(d, 0, 0.0) == 0
    assert ball_count(d, 0, 3.0) == 3
    assert ball_count(d, 0, 100.0) == d.n_points - 1
    assert [ball_count(d, 0, r) for r in (1.0, 2.5)] == [1, 2]
    with pytest.raises(MetricValidationError):
        ball_count(d, 0, -1.0)
    with pytest.raises(MetricValidationError):
        ball_count(d, 7, 1.0)


def test_ball_count_is_nondecreasing_in_r():
    rng = np.random.default_rng(5)
    d = pairwise_euclidean(PointCloud(rng.random((60, 2))))
    radii = np.linspace(0.0, 1.5, 40)
    counts = [ball_count(d, 7, r) for r in radii]
    assert counts == sorted(counts)
    assert max(counts) <= d.n_points - 1


def test_point_cloud_csv_with_header(tmp_path):
    cloud = PointCloud([[0.0, 1.0, 2.0], [3.0, 4.0, 5.5]])
    path = save_point_cloud(cloud, tmp_path / 'cloud.csv')
    assert path.read_text(encoding='utf-8').startswith('# x0,x1,x2\n')
    again = load_point_cloud(path)
    assert np.array_equal(again.coordinates, cloud.coordinates)


def test_evaluation_set_and_mask_file(tmp_path):
    mask = EvaluationSet([5, 1, 3], n_points=6)
    assert list(mask) == [1, 3, 5]
    assert mask.mask(6).tolist() == [False, True, False, True, False, True]
    again = load_mask(save_mask(mask, tmp_path / 'mask.txt'), 6)
    assert list(again) == [1, 3, 5]
    with pytest.raises(MetricValidationError):
        EvaluationSet([1, 1])
    with pytest.raises(MetricValidationError):
        EvaluationSet([6], n_points=6)


def test_scaled_matrix():
    d = DistanceMatrix(3, np.array([1.0, 2.0, 3.0]))
    assert d.scaled(2.0).entries.tolist() == [2.0, 4.0, 6.0]
    assert d.entries.tolist() == [1.0, 2.0, 3.0]
