"""
Geodesic engine: k-nearest-neighbor graphs and shortest-path distances
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.spatial.distance import cdist

from curvkit.config.settings import get_settings
from curvkit.exceptions import GraphDisconnectedError, MetricValidationError
from curvkit.models.graph import WeightedGraph
from curvkit.models.metric import DistanceMatrix, EvaluationSet, PointCloud
from curvkit.storage.graph_files import load_graph  # noqa: F401  (re-exported)
from curvkit.utils.helpers import index_blocks
from curvkit.utils.logger import logger


def _knn_edges(
    n_points: int,
    k: int,
    rows_fn: Callable[[np.ndarray], np.ndarray],
    block_size: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Deduplicated (lo, hi) endpoints of the union k-NN edge set"""
    if not 1 <= k <= n_points - 1:
        raise MetricValidationError(f"k must lie in [1, {n_points - 1}], got {k}")

    sources = []
    targets = []
    for block in index_blocks(np.arange(n_points), block_size):
        rows = np.array(rows_fn(block), dtype=np.float64)
        rows[np.arange(block.size), block] = np.inf
        # Stable sort: equal distances keep index order
        nearest = np.argsort(rows, axis=1, kind='stable')[:, :k]
        sources.append(np.repeat(block, k))
        targets.append(nearest.ravel())

    u = np.concatenate(sources)
    v = np.concatenate(targets)
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    keys = np.unique(lo * n_points + hi)
    lo, hi = keys // n_points, keys % n_points
    return lo, hi


def build_knn_graph(d: DistanceMatrix, k: int, block_size: Optional[int] = None) -> WeightedGraph:
    """
    Union-symmetrized k-nearest-neighbor graph

    Args:
        d: Distance matrix
        k: Neighbors per node, 1 <= k <= N-1 (ties broken by lower index)
        block_size: Rows sorted per block

    Returns:
        WeightedGraph with an edge (i, j) whenever either endpoint lists the other
    """
    block_size = block_size or get_settings().block_size
    lo, hi = _knn_edges(d.n_points, k, d.rows, block_size)
    graph = WeightedGraph(d.n_points, lo, hi, d.pair_values(lo, hi))
    logger.info(f"✅ Built {k}-NN graph: {graph.n_nodes} nodes, {graph.n_edges} edges")
    return graph


def knn_graph_from_cloud(cloud: PointCloud, k: int, block_size: Optional[int] = None) -> WeightedGraph:
    """Same graph as build_knn_graph(pairwise_euclidean(cloud), k) without the full matrix"""
    if not cloud.embedded:
        raise MetricValidationError("k-NN graph needs an embedded point cloud")
    block_size = block_size or get_settings().block_size
    coordinates = cloud.coordinates

    def rows(block: np.ndarray) -> np.ndarray:
        return cdist(coordinates[block], coordinates)

    lo, hi = _knn_edges(cloud.n_points, k, rows, block_size)
    weights = np.linalg.norm(coordinates[lo] - coordinates[hi], axis=1)
    graph = WeightedGraph(cloud.n_points, lo, hi, weights)
    logger.info(f"✅ Built {k}-NN graph from point cloud: {graph.n_nodes} nodes, {graph.n_edges} edges")
    return graph


def check_connected(graph: WeightedGraph, k: Optional[int] = None):
    """Raise GraphDisconnectedError naming an unreachable pair"""
    n_components, labels = connected_components(graph.to_csr(), directed=False)
    if n_components > 1:
        other = int(np.flatnonzero(labels != labels[0])[0])
        raise GraphDisconnectedError((0, other), n_components, k)


def shortest_path_distances(
    graph: WeightedGraph,
    sources: Optional[EvaluationSet] = None,
    threads: Optional[int] = None,
    k: Optional[int] = None,
):
    """
    Dijkstra distances on a connected graph

    Args:
        graph: Undirected weighted graph
        sources: Source nodes; all nodes when omitted
        threads: Worker count (defaults to CURVKIT_THREADS)
        k: Neighbor count used to build the graph, quoted in the disconnection error

    Returns:
        DistanceMatrix for all sources, otherwise an array of shape (len(sources), N)
    """
    check_connected(graph, k)
    settings = get_settings()
    threads = threads or settings.threads
    csr = graph.to_csr()
    n = graph.n_nodes

    if sources is None:
        entries = np.empty(n * (n - 1) // 2, dtype=np.float64)
        offsets = np.arange(n, dtype=np.int64)
        offsets = offsets * (offsets - 1) // 2

        def run(block: np.ndarray):
            rows = dijkstra(csr, directed=False, indices=block)
            for local, i in enumerate(block):
                if i > 0:
                    entries[offsets[i]:offsets[i] + i] = rows[local, :i]

        blocks = index_blocks(np.arange(n), settings.block_size)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, blocks))
        logger.info(f"✅ Shortest paths for all {n} nodes ({threads} threads)")
        return DistanceMatrix(n, entries)

    indices = sources.indices
    out = np.empty((indices.size, n), dtype=np.float64)

    def run_rows(start: int):
        block = indices[start:start + settings.block_size]
        out[start:start + block.size] = dijkstra(csr, directed=False, indices=block)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(run_rows, range(0, indices.size, settings.block_size)))
    logger.info(f"✅ Shortest paths from {indices.size} sources ({threads} threads)")
    return out


def geodesic_distances(cloud: PointCloud, k: int, threads: Optional[int] = None) -> DistanceMatrix:
    """k-NN graph geodesics of an embedded point cloud"""
    graph = knn_graph_from_cloud(cloud, k)
    return shortest_path_distances(graph, threads=threads, k=k)


def floyd_warshall_distances(graph: WeightedGraph) -> np.ndarray:
    """Dense O(V^3) all-pairs reference; inf marks unreachable pairs"""
    n = graph.n_nodes
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    dist[graph.u, graph.v] = np.minimum(dist[graph.u, graph.v], graph.weights)
    dist[graph.v, graph.u] = dist[graph.u, graph.v]
    for via in range(n):
        dist = np.minimum(dist, dist[:, via, None] + dist[None, via, :])
    return dist
