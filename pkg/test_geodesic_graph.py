"""
Tests for k-NN graph construction, shortest paths and edge-list files
Run with: pytest test_geodesic_graph.py
"""

import itertools
import math

import numpy as np
import pytest

from curvkit.engines.geodesic_engine import (
    build_knn_graph,
    floyd_warshall_distances,
    geodesic_distances,
    knn_graph_from_cloud,
    shortest_path_distances,
)
from curvkit.engines.metric_engine import pairwise_euclidean
from curvkit.exceptions import GraphDisconnectedError, GraphFormatError, MetricValidationError
from curvkit.models.graph import WeightedGraph
from curvkit.models.metric import DistanceMatrix, EvaluationSet, PointCloud
from curvkit.storage import load_graph, save_graph


def random_connected_graph(rng, n_nodes, extra_edges):
    edges = {}
    for i in range(1, n_nodes):
        edges[(int(rng.integers(0, i)), i)] = float(rng.integers(1, 20))
    while len(edges) < n_nodes - 1 + extra_edges:
        a, b = sorted(int(v) for v in rng.choice(n_nodes, size=2, replace=False))
        edges[(a, b)] = float(rng.integers(1, 20))
    keys = np.array(list(edges), dtype=np.int64)
    return WeightedGraph(n_nodes, keys[:, 0], keys[:, 1], np.array(list(edges.values())))


def line_distances(xs):
    xs = np.asarray(xs, dtype=np.float64)
    return DistanceMatrix.from_square(np.abs(xs[:, None] - xs[None, :]))


# Construction

def test_collinear_points_with_one_neighbor():
    graph = build_knn_graph(line_distances([0.0, 1.0, 2.0]), 1)
    assert graph.edge_set() == {(0, 1), (1, 2)}
    assert graph.weights.tolist() == [1.0, 1.0]


def test_ties_prefer_the_lower_index():
    # Point 1 is equidistant from 0 and 2
    graph = build_knn_graph(line_distances([0.0, 1.0, 2.0, 10.0]), 1)
    assert (0, 1) in graph.edge_set()
    assert (2, 3) in graph.edge_set()


def test_k_of_n_minus_one_gives_the_complete_graph():
    rng = np.random.default_rng(0)
    d = pairwise_euclidean(PointCloud(rng.random((12, 2))))
    graph = build_knn_graph(d, 11)
    assert graph.edge_set() == set(itertools.combinations(range(12), 2))
    for u, v, w in zip(graph.u, graph.v, graph.weights):
        assert w == d[u, v]


@pytest.mark.parametrize('seed', range(5))
def test_every_degree_is_at_least_k(seed):
    rng = np.random.default_rng(seed)
    d = pairwise_euclidean(PointCloud(rng.random((80, 3))))
    k = int(rng.integers(1, 10))
    graph = build_knn_graph(d, k, block_size=13)
    assert np.all(graph.degrees() >= k)


def test_graph_from_cloud_matches_graph_from_matrix():
    rng = np.random.default_rng(1)
    cloud = PointCloud(rng.random((60, 3)))
    from_cloud = knn_graph_from_cloud(cloud, 6)
    from_matrix = build_knn_graph(pairwise_euclidean(cloud), 6)
    assert from_cloud.edge_set() == from_matrix.edge_set()
    assert np.allclose(from_cloud.weights, from_matrix.weights, rtol=1e-14)


def test_k_out_of_range():
    with pytest.raises(MetricValidationError):
        build_knn_graph(line_distances([0.0, 1.0, 2.0]), 3)
    with pytest.raises(MetricValidationError):
        build_knn_graph(line_distances([0.0, 1.0, 2.0]), 0)


# Shortest paths

def test_path_graph():
    graph = WeightedGraph(3, [0, 1], [1, 2], [1.0, 1.0])
    d = shortest_path_distances(graph)
    assert d[0, 2] == 2.0
    assert d[0, 1] == 1.0


@pytest.mark.parametrize('seed', range(10))
def test_dijkstra_agrees_with_floyd_warshall(seed):
    rng = np.random.default_rng(seed)
    graph = random_connected_graph(rng, 50, 60)
    assert np.array_equal(shortest_path_distances(graph, threads=3).to_square(), floyd_warshall_distances(graph))


def test_source_rows_match_the_full_matrix():
    rng = np.random.default_rng(4)
    graph = random_connected_graph(rng, 40, 30)
    full = shortest_path_distances(graph).to_square()
    rows = shortest_path_distances(graph, sources=EvaluationSet([3, 17, 39], 40))
    assert rows.shape == (3, 40)
    assert np.array_equal(rows, full[[3, 17, 39]])


def test_thread_count_does_not_change_results(monkeypatch):
    monkeypatch.setenv('CURVKIT_BLOCK_SIZE', '7')
    rng = np.random.default_rng(9)
    graph = random_connected_graph(rng, 45, 40)
    single = shortest_path_distances(graph, threads=1)
    many = shortest_path_distances(graph, threads=4)
    assert single == many


def test_disconnected_graph_names_a_pair_and_suggests_larger_k():
    graph = WeightedGraph(4, [0, 2], [1, 3], [1.0, 1.0])
    with pytest.raises(GraphDisconnectedError, match='larger k') as info:
        shortest_path_distances(graph, k=1)
    assert info.value.pair == (0, 2)
    assert info.value.n_components == 2


def test_two_clusters_disconnect_with_small_k():
    xs = [0.0, 0.1, 0.2, 10.0, 10.1, 10.2]
    with pytest.raises(GraphDisconnectedError):
        shortest_path_distances(build_knn_graph(line_distances(xs), 2), k=2)


def test_unit_circle_arc_lengths():
    angles = np.sort(np.random.default_rng(7).uniform(0.0, 2 * math.pi, 1000))
    cloud = PointCloud(np.column_stack([np.cos(angles), np.sin(angles)]))
    estimated = geodesic_distances(cloud, 10).to_square()
    gap = np.abs(angles[:, None] - angles[None, :])
    arc = np.minimum(gap, 2 * math.pi - gap)
    off = ~np.eye(1000, dtype=bool)
    assert np.max(np.abs(estimated[off] - arc[off]) / arc[off]) < 0.02


def test_graph_distances_form_a_metric_above_the_chords():
    rng = np.random.default_rng(12)
    cloud = PointCloud(rng.random((60, 2)))
    chords = pairwise_euclidean(cloud).to_square()
    d = geodesic_distances(cloud, 5).to_square()
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0.0)
    assert np.all(d >= chords - 1e-12)
    for i, j, k in itertools.permutations(range(60), 3):
        assert d[i, k] <= d[i, j] + d[j, k] + 1e-12


def test_more_neighbors_never_lengthen_paths():
    rng = np.random.default_rng(13)
    cloud = PointCloud(rng.random((80, 3)))
    previous = geodesic_distances(cloud, 4).to_square()
    for k in (6, 10, 20):
        current = geodesic_distances(cloud, k).to_square()
        assert np.all(current <= previous + 1e-12)
        previous = current


# Edge lists

def test_single_edge_file(tmp_path):
    path = tmp_path / 'g.txt'
    path.write_text('0 1 1.5\n', encoding='utf-8')
    graph = load_graph(path)
    assert graph.n_nodes == 2
    assert graph.adjacency(0) == [(1, 1.5)]
    assert graph.adjacency(1) == [(0, 1.5)]
    assert shortest_path_distances(graph)[1, 0] == 1.5


def test_duplicate_edges(tmp_path):
    same = tmp_path / 'same.txt'
    same.write_text('0 1 2.0\n1 0 2.0\n', encoding='utf-8')
    assert load_graph(same).n_edges == 1

    conflicting = tmp_path / 'conflict.txt'
    conflicting.write_text('0 1 2.0\n1 0 3.0\n', encoding='utf-8')
    with pytest.raises(GraphFormatError, match='weights'):
        load_graph(conflicting)


@pytest.mark.parametrize('text', ['0 1\n', '0 1 -2\n', '0 x 1\n', '2 2 1\n', '# only a comment\n'])
def test_malformed_edge_lists(tmp_path, text):
    path = tmp_path / 'bad.txt'
    path.write_text(text, encoding='utf-8')
    with pytest.raises(GraphFormatError):
        load_graph(path)


def test_triangle_graph_shortest_paths_are_direct_edges(tmp_path):
    path = tmp_path / 'triangle.txt'
    path.write_text('# triangle\n0 1 3\n1 2 4\n0 2 5\n', encoding='utf-8')
    graph = load_graph(path)
    d = shortest_path_distances(graph)
    assert (d[0, 1], d[1, 2], d[0, 2]) == (3.0, 4.0, 5.0)
    assert np.array_equal(d.to_square(), floyd_warshall_distances(graph))


def test_edge_list_round_trip(tmp_path):
    graph = random_connected_graph(np.random.default_rng(2), 20, 10)
    again = load_graph(save_graph(graph, tmp_path / 'g.txt'))
    assert again.edge_set() == graph.edge_set()
    assert np.array_equal(again.weights, graph.weights)
