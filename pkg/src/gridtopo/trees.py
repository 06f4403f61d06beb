"""Radial topology design and its quality certificates.

The designed tree is the best rooted shortest-path tree over all roots
(edge lengths 1/b). On trees, the topology cost collapses to a
requirement-weighted sum of path distances, which is what both the root
scan and the enumeration oracle evaluate; equality with the Laplacian
route is asserted by the test suite.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .costs import CostMatrices
from .errors import CertificateError, InfeasibleError, ValidationError
from .graphs import median_node, shortest_path_tree, shortest_paths
from .network import Network, Topology, edge_index_list

ENUMERATION_CAP = 10_000_000


@dataclass(frozen=True)
class TreeDesignResult:
    """A spanning-tree design with optional quality certificates."""

    topology: Topology
    cost: float
    root: int | None = None
    gap_bound: float | None = None
    certified_ratio: float | None = None


@dataclass(frozen=True)
class RatioCertificate:
    """Measured optimality ratio of a designed tree, with its a-priori bound."""

    ratio: float
    bound: float
    design_cost: float
    optimal_cost: float
    median_upper_bound: float


def tree_cost_by_paths(
    network: Network, tree: Topology | Sequence[int], cost: CostMatrices
) -> float:
    """Weighted sum of pairwise tree distances, edge lengths 1/b.

    Equals Tr(L_w L_b+) when the selection is a spanning tree; rejects
    selections that are not spanning trees.
    """
    idx = edge_index_list(network, tree)
    n = network.n
    if len(idx) != n - 1 or not _is_spanning_tree(network, idx):
        raise ValidationError("selection is not a spanning tree")
    adj = _plain_adjacency(network, idx)
    w_rows = [list(map(float, row)) for row in cost.pair_weights]
    return _tree_path_cost(adj, w_rows, n)


def best_rooted_tree(network: Network, cost: CostMatrices) -> TreeDesignResult:
    """Scan all roots, build each shortest-path tree, keep the cheapest.

    The first root (smallest id) achieving the minimum wins. Runs in
    O(N * (E log N + N^2)) time.
    """
    _require_design_objective(cost)
    w_rows = [list(map(float, row)) for row in cost.pair_weights]
    best: tuple[float, int, Topology] | None = None
    for root in range(network.n):
        tree = shortest_path_tree(network, root)
        adj = _plain_adjacency(network, tree.edge_indices)
        c = _tree_path_cost(adj, w_rows, network.n)
        if best is None or c < best[0]:
            best = (c, root, tree)
    assert best is not None
    bound = None
    try:
        bound = gap_bound(network, cost)
    except InfeasibleError:
        pass
    return TreeDesignResult(topology=best[2], cost=best[0], root=best[1], gap_bound=bound)


def brute_force_tree(
    network: Network, cost: CostMatrices, cap: int = ENUMERATION_CAP
) -> TreeDesignResult:
    """Globally optimal spanning tree by enumeration of (N-1)-subsets.

    Subsets are visited in lexicographic edge-index order and only strict
    improvements are kept, so ties resolve to the lexicographically first
    tree. Raises when the subset count exceeds ``cap``.
    """
    _require_design_objective(cost)
    m = len(network.edges)
    n = network.n
    n_subsets = math.comb(m, n - 1)
    if n_subsets > cap:
        raise InfeasibleError(
            f"brute-force tree search needs {n_subsets} subsets, above the cap of {cap}"
        )
    w_rows = [list(map(float, row)) for row in cost.pair_weights]
    pairs = [e.pair for e in network.edges]
    lengths = [1.0 / e.b for e in network.edges]
    best_cost = np.inf
    best_subset: tuple[int, ...] | None = None
    for subset in itertools.combinations(range(m), n - 1):
        if not _spanning_tree_pairs(n, subset, pairs):
            continue
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for ei in subset:
            i, j = pairs[ei]
            d = lengths[ei]
            adj[i].append((j, d))
            adj[j].append((i, d))
        c = _tree_path_cost(adj, w_rows, n)
        if c < best_cost:
            best_cost = c
            best_subset = subset
    if best_subset is None:  # pragma: no cover - candidate graph is connected
        raise InfeasibleError("no spanning tree found in the candidate edge set")
    bound = None
    try:
        bound = gap_bound(network, cost)
    except InfeasibleError:
        pass
    return TreeDesignResult(
        topology=Topology(best_subset), cost=float(best_cost),
        gap_bound=bound, certified_ratio=1.0,
    )


def gap_bound(network: Network, cost: CostMatrices) -> float:
    """A-priori bound on (designed tree cost) / (optimal tree cost).

    Ratio of the largest per-node total requirement to the smallest sum of
    the floor(N/2) lightest requirements at any node. At most 2 for uniform
    weights. Degenerate (raises) when some node has too few positive
    weights, e.g. for a pure frequency objective.
    """
    w = cost.pair_weights
    n = network.n
    row_sums = w.sum(axis=1)
    numerator = float(row_sums.max())
    half = n // 2
    denominator = np.inf
    for i in range(n):
        others = np.sort(np.delete(w[i], i))
        denominator = min(denominator, float(others[:half].sum()))
    if numerator <= 0 or denominator <= 0:
        raise InfeasibleError("gap bound degenerate: pairwise weights too sparse or zero")
    return numerator / denominator


def median_upper_bound(network: Network, cost: CostMatrices) -> float:
    """Cost ceiling for the median-rooted shortest-path tree."""
    m = median_node(network)
    dist, _, _ = shortest_paths(network, m)
    max_row = float(cost.pair_weights.sum(axis=1).max())
    return float(sum(dist)) * max_row


def certify_ratio(
    network: Network,
    cost: CostMatrices,
    result: TreeDesignResult,
    cap: int = ENUMERATION_CAP,
) -> RatioCertificate:
    """Measure the design's cost ratio against the enumeration oracle.

    Raises :class:`CertificateError` if the measured ratio exceeds the
    a-priori bound or the design costs more than the median-rooted ceiling;
    both would mean the design logic is broken.
    """
    optimal = brute_force_tree(network, cost, cap=cap)
    ratio = result.cost / optimal.cost
    bound = gap_bound(network, cost)
    ceiling = median_upper_bound(network, cost)
    if ratio > bound * (1 + 1e-9):
        raise CertificateError(f"measured ratio {ratio} exceeds the a-priori bound {bound}")
    if result.cost > ceiling * (1 + 1e-9):
        raise CertificateError(
            f"design cost {result.cost} exceeds the median-rooted ceiling {ceiling}"
        )
    return RatioCertificate(
        ratio=float(ratio),
        bound=float(bound),
        design_cost=float(result.cost),
        optimal_cost=float(optimal.cost),
        median_upper_bound=float(ceiling),
    )


def _require_design_objective(cost: CostMatrices) -> None:
    if not np.any(cost.pair_weights):
        raise InfeasibleError(
            "objective has no pairwise weights; every connected topology costs the same"
        )


def _plain_adjacency(network: Network, indices: Sequence[int]) -> list[list[tuple[int, float]]]:
    adj: list[list[tuple[int, float]]] = [[] for _ in range(network.n)]
    for ei in indices:
        e = network.edges[ei]
        d = 1.0 / e.b
        adj[e.i].append((e.j, d))
        adj[e.j].append((e.i, d))
    return adj


def _tree_path_cost(adj: list[list[tuple[int, float]]], w_rows: list[list[float]], n: int) -> float:
    """Sum of w_ij * tree-distance(i, j) over unordered pairs, by DFS per source."""
    total = 0.0
    dist = [0.0] * n
    for s in range(n):
        dist[s] = 0.0
        stack = [(s, s)]
        while stack:
            u, parent = stack.pop()
            du = dist[u]
            for v, d in adj[u]:
                if v != parent:
                    dist[v] = du + d
                    stack.append((v, u))
        ws = w_rows[s]
        for t in range(s + 1, n):
            wv = ws[t]
            if wv != 0.0:
                total += wv * dist[t]
    return total


def _is_spanning_tree(network: Network, indices: Sequence[int]) -> bool:
    pairs = [e.pair for e in network.edges]
    return _spanning_tree_pairs(network.n, indices, pairs)


def _spanning_tree_pairs(
    n: int, indices: Sequence[int], pairs: Sequence[tuple[int, int]]
) -> bool:
    """Union-find check: exactly n-1 edges, no cycle, all nodes covered."""
    if len(indices) != n - 1:
        return False
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for ei in indices:
        i, j = pairs[ei]
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True
