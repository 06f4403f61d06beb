"""Laplacian construction, reduced solves, and shortest-path machinery.

Everything that touches graph structure lives here: building weighted
Laplacians from edge selections, connectivity checks (always by traversal,
never by numerical rank), the Moore-Penrose pseudo-inverse, effective
inverse susceptance between node pairs, and Dijkstra shortest-path trees
with a deterministic tie-break.
"""

from __future__ import annotations

import heapq
from collections import deque
from typing import Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DisconnectedError, NumericalError, ValidationError
from .network import Network, Topology, edge_index_list

# Tentative Dijkstra distances closer than this are treated as equal and the
# predecessor with the smaller node id wins, so trees are platform stable.
TIE_EPS = 1e-12


def is_connected(network: Network, edges: Topology | Sequence[int] | None = None) -> bool:
    """True iff the selected edges reach every node (breadth-first search)."""
    idx = edge_index_list(network, edges)
    adj: list[list[int]] = [[] for _ in range(network.n)]
    for ei in idx:
        e = network.edges[ei]
        adj[e.i].append(e.j)
        adj[e.j].append(e.i)
    seen = [False] * network.n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == network.n


class LaplacianView:
    """A graph Laplacian plus its reference-node reduction.

    The reduced matrix (row and column ``ref`` deleted) is symmetric positive
    definite exactly when the underlying edge set is connected; solves against
    it go through a Cholesky factorization computed once and cached. The full
    matrix is exposed read-only.
    """

    def __init__(self, matrix: np.ndarray, ref: int = 0, connected: bool = False):
        m = np.array(matrix, dtype=float)
        m.setflags(write=False)
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValidationError(f"Laplacian must be square, got shape {m.shape}")
        if not 0 <= ref < n:
            raise ValidationError(f"reference node {ref} out of range for {n} nodes")
        self.matrix = m
        self.ref = ref
        self.connected = bool(connected)
        self._keep = np.array([i for i in range(n) if i != ref])
        self._chol = None

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def reduced(self) -> np.ndarray:
        return self.matrix[np.ix_(self._keep, self._keep)]

    def reduce(self, other: np.ndarray) -> np.ndarray:
        """Delete this view's reference row/column from a conformable matrix."""
        other = np.asarray(other, dtype=float)
        if other.shape != self.matrix.shape:
            raise ValidationError(f"expected shape {self.matrix.shape}, got {other.shape}")
        return other[np.ix_(self._keep, self._keep)]

    def reduced_position(self, node: int) -> int:
        """Index of ``node`` inside the reduced matrix; -1 for the reference."""
        if node == self.ref:
            return -1
        return node - 1 if node > self.ref else node

    def _factor(self):
        if self._chol is None:
            if not self.connected:
                raise DisconnectedError("reduced Laplacian is singular: edge set is disconnected")
            try:
                self._chol = cho_factor(self.reduced)
            except np.linalg.LinAlgError as exc:  # pragma: no cover - connected => SPD
                raise NumericalError(f"Cholesky factorization failed: {exc}") from exc
        return self._chol

    def solve_reduced(self, rhs: np.ndarray) -> np.ndarray:
        """Apply the inverse of the reduced Laplacian to a vector or matrix."""
        return cho_solve(self._factor(), np.asarray(rhs, dtype=float))

    def pseudo_inverse(self) -> np.ndarray:
        """Moore-Penrose pseudo-inverse via the rank-one correction identity.

        For a connected Laplacian, inv(L + J/N) - J/N with J the all-ones
        matrix equals the pseudo-inverse exactly.
        """
        if not self.connected:
            raise DisconnectedError("pseudo-inverse requested for a disconnected edge set")
        n = self.n
        j = np.full((n, n), 1.0 / n)
        return np.linalg.inv(self.matrix + j) - j

    def effective_inverse_susceptance(self, i: int, j: int) -> float:
        """Phase-angle drop per unit power transferred between nodes i and j.

        Computed as the quadratic form of the reduced inverse on the
        indicator difference of the two nodes; equals
        L+(i,i) + L+(j,j) - 2 L+(i,j) and is independent of the reference.
        """
        n = self.n
        if not 0 <= i < n or not 0 <= j < n:
            raise ValidationError(f"node pair ({i}, {j}) out of range for {n} nodes")
        if i == j:
            return 0.0
        rhs = np.zeros(n - 1)
        pi = self.reduced_position(i)
        pj = self.reduced_position(j)
        if pi >= 0:
            rhs[pi] = 1.0
        if pj >= 0:
            rhs[pj] = -1.0
        x = self.solve_reduced(rhs)
        return float(rhs @ x)


def build_laplacian(
    network: Network,
    edges: Topology | Sequence[int] | None = None,
    weight: str | Sequence[float] = "susceptance",
    ref: int = 0,
) -> LaplacianView:
    """Assemble the weighted Laplacian of an edge selection.

    ``weight`` selects susceptance ("susceptance"/"b"), conductance
    ("conductance"/"g"), or an explicit per-edge weight sequence aligned
    with the selection.
    """
    idx = edge_index_list(network, edges)
    if isinstance(weight, str):
        if weight in ("susceptance", "b"):
            values = [network.edges[ei].b for ei in idx]
        elif weight in ("conductance", "g"):
            values = [network.edges[ei].g for ei in idx]
        else:
            raise ValidationError(f"unknown weight selector {weight!r}")
    else:
        values = [float(w) for w in weight]
        if len(values) != len(idx):
            raise ValidationError(
                f"got {len(values)} custom weights for {len(idx)} selected edges"
            )
        if any(w < 0 for w in values):
            raise ValidationError("custom Laplacian weights must be nonnegative")
    lap = laplacian_from_pairs(network.n, [network.edges[ei].pair for ei in idx], values)
    return LaplacianView(lap, ref=ref, connected=is_connected(network, idx))


def laplacian_from_pairs(
    n: int, pairs: Sequence[tuple[int, int]], weights: Sequence[float]
) -> np.ndarray:
    lap = np.zeros((n, n))
    for (i, j), w in zip(pairs, weights):
        lap[i, i] += w
        lap[j, j] += w
        lap[i, j] -= w
        lap[j, i] -= w
    return lap


def adjacency_with_lengths(
    network: Network, edges: Topology | Sequence[int] | None = None
) -> list[list[tuple[int, float, int]]]:
    """Adjacency lists of (neighbor, length, edge index) with length 1/b."""
    idx = edge_index_list(network, edges)
    adj: list[list[tuple[int, float, int]]] = [[] for _ in range(network.n)]
    for ei in idx:
        e = network.edges[ei]
        d = 1.0 / e.b
        adj[e.i].append((e.j, d, ei))
        adj[e.j].append((e.i, d, ei))
    return adj


def shortest_paths(
    network: Network, root: int, edges: Topology | Sequence[int] | None = None
) -> tuple[list[float], list[int], list[int]]:
    """Dijkstra from ``root`` over the selection, edge lengths 1/b.

    Returns (distance, predecessor, predecessor edge index) per node, with
    -1 predecessors at the root. Among predecessors whose tentative distance
    ties within TIE_EPS, the smallest node id wins.
    """
    n = network.n
    if not 0 <= root < n:
        raise ValidationError(f"root {root} out of range for {n} nodes")
    adj = adjacency_with_lengths(network, edges)
    dist = [np.inf] * n
    pred = [-1] * n
    pred_edge = [-1] * n
    dist[root] = 0.0
    settled = [False] * n
    heap: list[tuple[float, int]] = [(0.0, root)]
    while heap:
        du, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        for v, length, ei in adj[u]:
            nd = du + length
            if nd < dist[v] - TIE_EPS:
                dist[v] = nd
                pred[v] = u
                pred_edge[v] = ei
                heapq.heappush(heap, (nd, v))
            elif nd <= dist[v] + TIE_EPS and 0 <= u < pred[v]:
                pred[v] = u
                pred_edge[v] = ei
    if not all(settled):
        raise DisconnectedError("selected edge set does not reach every node")
    return dist, pred, pred_edge


def shortest_path_tree(
    network: Network, root: int, edges: Topology | Sequence[int] | None = None
) -> Topology:
    """Spanning tree in which every node sits at its shortest-path distance."""
    _, _, pred_edge = shortest_paths(network, root, edges)
    chosen = sorted(ei for node, ei in enumerate(pred_edge) if node != root)
    return Topology(tuple(chosen))


def median_node(network: Network, edges: Topology | Sequence[int] | None = None) -> int:
    """Node minimizing the total shortest-path distance to all others."""
    best_node = -1
    best_total = np.inf
    for m in range(network.n):
        dist, _, _ = shortest_paths(network, m, edges)
        total = sum(dist)
        if total < best_total:
            best_total = total
            best_node = m
    return best_node
