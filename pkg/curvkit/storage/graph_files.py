"""
Edge-list reader/writer for weighted graphs

Each non-comment line is "i j w" with 0-based node indices and a nonnegative
weight. Edges are undirected; a repeated edge must repeat the same weight.
"""

from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np

from curvkit.exceptions import GraphFormatError
from curvkit.models.graph import WeightedGraph
from curvkit.utils.logger import logger

PathLike = Union[str, Path]


def load_graph(path: PathLike, n_nodes: Optional[int] = None) -> WeightedGraph:
    """
    Load an undirected weighted graph from an edge list

    Args:
        path: Edge-list file
        n_nodes: Node count; defaults to the largest index + 1

    Returns:
        Symmetrized WeightedGraph
    """
    path = Path(path)
    if not path.exists():
        raise GraphFormatError(f"edge list not found: {path}")

    edges: Dict[Tuple[int, int], float] = {}
    with open(path, 'r', encoding='utf-8') as f:
        for lineno, line in enumerate(f, start=1):
            text = line.split('#', 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            if len(parts) != 3:
                raise GraphFormatError(f"{path}:{lineno}: expected 'i j w', got '{text}'")
            try:
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError as error:
                raise GraphFormatError(f"{path}:{lineno}: {error}") from error
            if i < 0 or j < 0:
                raise GraphFormatError(f"{path}:{lineno}: negative node index")
            if i == j:
                raise GraphFormatError(f"{path}:{lineno}: self-loop on node {i}")
            if not np.isfinite(w) or w < 0:
                raise GraphFormatError(f"{path}:{lineno}: weight must be finite and nonnegative, got {w}")
            key = (min(i, j), max(i, j))
            if key in edges and edges[key] != w:
                raise GraphFormatError(
                    f"{path}:{lineno}: edge {key} listed with weights {edges[key]} and {w}"
                )
            edges[key] = w

    if not edges:
        raise GraphFormatError(f"{path}: no edges")
    largest = max(max(k) for k in edges)
    n_nodes = largest + 1 if n_nodes is None else n_nodes
    if largest >= n_nodes:
        raise GraphFormatError(f"{path}: node {largest} out of range for {n_nodes} nodes")

    keys = np.array(list(edges.keys()), dtype=np.int64)
    weights = np.array(list(edges.values()), dtype=np.float64)
    graph = WeightedGraph(n_nodes, keys[:, 0], keys[:, 1], weights)
    logger.info(f"✅ Loaded graph with {graph.n_nodes} nodes and {graph.n_edges} edges from {path}")
    return graph


def save_graph(graph: WeightedGraph, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for u, v, w in zip(graph.u, graph.v, graph.weights):
            f.write(f'{int(u)} {int(v)} {float(w)!r}\n')
    return path
