"""
Undirected weighted graph used for geodesic estimation
"""

from typing import List, Tuple

import numpy as np
from scipy.sparse import csr_matrix

from curvkit.exceptions import GraphFormatError


class WeightedGraph:
    """
    Undirected graph with nonnegative weights.

    Each edge is stored once as (u, v, w) with u < v; `to_csr` produces the
    symmetric adjacency. Zero weights are kept as explicit entries so that
    duplicate points stay connected.
    """

    def __init__(self, n_nodes: int, u: np.ndarray, v: np.ndarray, weights: np.ndarray):
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        weights = np.asarray(weights, dtype=np.float64)
        if not (u.shape == v.shape == weights.shape):
            raise GraphFormatError("edge arrays must have equal length")
        if np.any(u == v):
            raise GraphFormatError("self-loops are not allowed")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise GraphFormatError("edge weights must be finite and nonnegative")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n_nodes):
            raise GraphFormatError(f"edge endpoint out of range for {n_nodes} nodes")

        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        order = np.lexsort((hi, lo))
        self.n_nodes = int(n_nodes)
        self.u = lo[order]
        self.v = hi[order]
        self.weights = weights[order]
        self._csr = None

    @property
    def n_edges(self) -> int:
        return int(self.u.size)

    def to_csr(self) -> csr_matrix:
        """Symmetric sparse adjacency (explicit zeros preserved)"""
        if self._csr is None:
            rows = np.concatenate([self.u, self.v])
            cols = np.concatenate([self.v, self.u])
            data = np.concatenate([self.weights, self.weights])
            self._csr = csr_matrix((data, (rows, cols)), shape=(self.n_nodes, self.n_nodes))
        return self._csr

    def adjacency(self, node: int) -> List[Tuple[int, float]]:
        """(neighbor, weight) pairs of a node"""
        csr = self.to_csr()
        start, end = csr.indptr[node], csr.indptr[node + 1]
        return [(int(j), float(w)) for j, w in zip(csr.indices[start:end], csr.data[start:end])]

    def degrees(self) -> np.ndarray:
        return np.bincount(np.concatenate([self.u, self.v]), minlength=self.n_nodes)

    def edge_set(self) -> set:
        return {(int(a), int(b)) for a, b in zip(self.u, self.v)}

    def __repr__(self) -> str:
        return f"WeightedGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"
