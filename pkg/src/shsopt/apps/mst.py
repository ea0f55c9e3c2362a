"""Minimum spanning tree through a Prüfer-sequence encoding.

A decision vector of ``N - 2`` reals in ``[1, N]`` is rounded to node labels
and read as a Prüfer sequence, so every vector decodes to a spanning tree.
Edge weights are Euclidean lengths rounded to the nearest integer.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from ..engine import ConfigurationError, ObjectiveSpec

# bundled 22-node network: (X, Y) per node, nodes 1..22
NODES_22 = np.array(
    [
        (30, 20), (0, 60), (70, 0), (0, 40), (100, 40), (20, 80), (60, 80),
        (20, 10), (0, 80), (10, 80), (90, 100), (40, 80), (20, 20), (80, 40),
        (60, 20), (0, 100), (40, 20), (20, 30), (80, 80), (20, 100), (60, 60),
        (100, 70),
    ]
)


@dataclass(frozen=True)
class GraphInstance:
    node_xy: np.ndarray
    name: str = "graph"

    def __post_init__(self):
        xy = np.asarray(self.node_xy, dtype=float)
        if xy.ndim != 2 or xy.shape[1] != 2:
            raise ConfigurationError("node_xy must be an (N, 2) array")
        if xy.shape[0] < 2:
            raise ConfigurationError("a graph needs at least 2 nodes")
        if not np.all(np.isfinite(xy)):
            raise ConfigurationError("node coordinates must be finite")
        object.__setattr__(self, "node_xy", xy)

    @property
    def n_nodes(self) -> int:
        return self.node_xy.shape[0]


@dataclass(frozen=True)
class MstSolution:
    edges: list[tuple[int, int]]  # 0-based node pairs, (small, large)
    weight: int


def round_half_up(x):
    return np.floor(np.asarray(x) + 0.5)


def weight_matrix(inst: GraphInstance) -> np.ndarray:
    d = inst.node_xy[:, None, :] - inst.node_xy[None, :, :]
    return round_half_up(np.sqrt(np.sum(d**2, axis=-1))).astype(np.int64)


def prufer_to_edges(seq, n: int) -> list[tuple[int, int]]:
    """Tree edges for a Prüfer sequence of 0-based labels over ``n`` nodes."""
    seq = [int(s) for s in seq]
    if len(seq) != n - 2:
        raise ValueError(f"a Prüfer sequence for {n} nodes has length {n - 2}")
    degree = [1] * n
    for s in seq:
        degree[s] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for s in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, s), max(leaf, s)))
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(leaves, s)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((min(u, v), max(u, v)))
    return edges


def vector_to_prufer(v, n: int) -> np.ndarray:
    """Round each coordinate to a label in 1..n and shift to 0-based."""
    labels = np.clip(round_half_up(np.asarray(v, dtype=float)), 1, n).astype(int)
    return labels - 1


def decode(inst: GraphInstance, v, weights=None) -> MstSolution:
    n = inst.n_nodes
    W = weight_matrix(inst) if weights is None else weights
    if n == 2:
        return MstSolution([(0, 1)], int(W[0, 1]))
    edges = prufer_to_edges(vector_to_prufer(v, n)[: n - 2], n)
    return MstSolution(edges, int(sum(W[a, b] for a, b in edges)))


def mst_objective(inst: GraphInstance) -> ObjectiveSpec:
    """Tree weight of the decoded Prüfer sequence.

    A two-node graph has an empty sequence; it gets a single ignored
    coordinate so the spec keeps a positive dimension.
    """
    n = inst.n_nodes
    W = weight_matrix(inst)
    dim = max(n - 2, 1)
    return ObjectiveSpec(
        name=f"mst:{inst.name}",
        lower=np.ones(dim),
        upper=np.full(dim, float(n)),
        func=lambda v: float(decode(inst, v, W).weight),
    )


def prim_mst_oracle(inst: GraphInstance) -> MstSolution:
    """Exact MST on the rounded weight matrix (dense Prim)."""
    n = inst.n_nodes
    W = weight_matrix(inst)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = W[0].astype(float)
    parent = np.zeros(n, dtype=int)
    best[0] = math.inf
    edges = []
    for _ in range(n - 1):
        cand = np.where(in_tree, math.inf, best)
        v = int(np.argmin(cand))
        edges.append((min(v, parent[v]), max(v, parent[v])))
        in_tree[v] = True
        closer = (~in_tree) & (W[v] < best)
        best[closer] = W[v][closer]
        parent[closer] = v
    return MstSolution(sorted(edges), int(sum(W[a, b] for a, b in edges)))
