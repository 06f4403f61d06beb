"""Meshed topology design: greedy augmentation of a designed tree.

The greedy loop keeps the inverse of the reduced susceptance Laplacian
up to date with Sherman-Morrison rank-one corrections, so scoring one
candidate edge is O(N^2) instead of a fresh O(N^3) solve. A periodic
refactorization caps floating-point drift. Enumeration oracles for both
augmentation and fully global search live here too.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .costs import CostMatrices, frequency_penalty, topology_cost
from .errors import InfeasibleError, ValidationError
from .graphs import build_laplacian, is_connected
from .network import Network, Topology, edge_index_list
from .trees import ENUMERATION_CAP, best_rooted_tree

REFACTOR_INTERVAL = 25
DELTA_TIE_EPS = 1e-12


@dataclass(frozen=True)
class MeshDesignResult:
    """A k-edge design with the per-step greedy trace (empty for oracles)."""

    topology: Topology
    cost: float
    h2_squared: float
    seed: Topology | None = None
    seed_cost: float | None = None
    trace: tuple[tuple[int, float], ...] = ()


class ReducedCostState:
    """Incremental Tr(L_w_hat L_b_hat^-1) under edge additions.

    Holds the dense inverse of the reduced susceptance Laplacian for the
    current selection. ``cost_delta`` prices a candidate edge exactly via
    the rank-one inverse update; ``add`` applies it. Every
    ``refactor_interval`` accepted edges the inverse and cost are rebuilt
    from scratch to stop drift accumulation.
    """

    def __init__(
        self,
        network: Network,
        cost: CostMatrices,
        topology: Topology | Sequence[int],
        ref: int = 0,
        refactor_interval: int = REFACTOR_INTERVAL,
    ):
        self._network = network
        self._cost_matrices = cost
        self._ref = ref
        self._refactor_interval = refactor_interval
        self.selected = set(edge_index_list(network, topology))
        if not is_connected(network, sorted(self.selected)):
            raise ValidationError("rank-one cost tracking needs a connected starting topology")
        self._adds_since_refactor = 0
        self._rebuild()

    def _rebuild(self) -> None:
        lap = build_laplacian(self._network, sorted(self.selected), ref=self._ref)
        self._lw_hat = lap.reduce(self._cost_matrices.lw)
        self._inv = lap.solve_reduced(np.eye(self._network.n - 1))
        self.cost = float(np.trace(self._inv @ self._lw_hat))
        self._adds_since_refactor = 0

    def _column_difference(self, edge_index: int) -> np.ndarray:
        """inv @ (indicator_i - indicator_j) for the candidate's endpoints."""
        e = self._network.edges[edge_index]
        pi = self._reduced_position(e.i)
        pj = self._reduced_position(e.j)
        if pi < 0:
            return -self._inv[:, pj]
        if pj < 0:
            return self._inv[:, pi]
        return self._inv[:, pi] - self._inv[:, pj]

    def _reduced_position(self, node: int) -> int:
        if node == self._ref:
            return -1
        return node - 1 if node > self._ref else node

    def cost_delta(self, edge_index: int) -> float:
        """Exact change of the tracked cost if this edge were added (<= 0)."""
        if edge_index in self.selected:
            raise ValidationError(f"edge {edge_index} is already selected")
        e = self._network.edges[edge_index]
        v = self._column_difference(edge_index)
        pi = self._reduced_position(e.i)
        pj = self._reduced_position(e.j)
        quad = (v[pi] if pi >= 0 else 0.0) - (v[pj] if pj >= 0 else 0.0)
        denom = 1.0 + e.b * quad
        numer = e.b * float(v @ self._lw_hat @ v)
        return float(-numer / denom)

    def add(self, edge_index: int) -> float:
        """Add the edge, update inverse and cost, return the applied delta."""
        delta = self.cost_delta(edge_index)
        e = self._network.edges[edge_index]
        v = self._column_difference(edge_index)
        pi = self._reduced_position(e.i)
        pj = self._reduced_position(e.j)
        quad = (v[pi] if pi >= 0 else 0.0) - (v[pj] if pj >= 0 else 0.0)
        scale = e.b / (1.0 + e.b * quad)
        self._inv = self._inv - scale * np.outer(v, v)
        self.cost += delta
        self.selected.add(edge_index)
        self._adds_since_refactor += 1
        if self._adds_since_refactor >= self._refactor_interval:
            self._rebuild()
        return delta


def greedy_mesh(
    network: Network,
    cost: CostMatrices,
    k: int,
    seed: Topology | None = None,
    refactor_interval: int = REFACTOR_INTERVAL,
) -> MeshDesignResult:
    """Grow a k-edge design: tree first, then one cost-minimizing edge at a time.

    The seed defaults to the best rooted shortest-path tree. Ties between
    candidate deltas (within 1e-12) resolve to the smallest edge index.
    """
    m = len(network.edges)
    n = network.n
    if not n - 1 <= k <= m:
        raise InfeasibleError(f"edge budget k={k} outside [{n - 1}, {m}]")
    if seed is None:
        seed = best_rooted_tree(network, cost).topology
    if len(seed.edge_indices) > k:
        raise InfeasibleError(f"seed already has {len(seed.edge_indices)} edges, budget is {k}")
    state = ReducedCostState(network, cost, seed, refactor_interval=refactor_interval)
    seed_cost = state.cost
    remaining = sorted(set(range(m)) - state.selected)
    trace: list[tuple[int, float]] = []
    for _ in range(k - len(seed.edge_indices)):
        best_idx = -1
        best_delta = np.inf
        for ei in remaining:
            d = state.cost_delta(ei)
            if d < best_delta - DELTA_TIE_EPS:
                best_delta = d
                best_idx = ei
        state.add(best_idx)
        remaining.remove(best_idx)
        trace.append((best_idx, state.cost))
    topology = Topology(tuple(sorted(state.selected)))
    final_cost = topology_cost(cost, build_laplacian(network, topology))
    h2 = (final_cost + frequency_penalty(cost, network)) / (2.0 * network.damping)
    return MeshDesignResult(
        topology=topology,
        cost=final_cost,
        h2_squared=h2,
        seed=seed,
        seed_cost=seed_cost,
        trace=tuple(trace),
    )


def brute_force_mesh(
    network: Network,
    cost: CostMatrices,
    k: int,
    seed: Topology | None = None,
    cap: int = ENUMERATION_CAP,
) -> MeshDesignResult:
    """Optimal k-edge selection by enumeration.

    With a ``seed`` the search adds the best (k - seed size)-subset on top
    of it (optimal augmentation); without one it scans every connected
    k-edge subset of the candidate list. Lexicographically first subset
    wins ties.
    """
    m = len(network.edges)
    n = network.n
    if not n - 1 <= k <= m:
        raise InfeasibleError(f"edge budget k={k} outside [{n - 1}, {m}]")
    ref = 0
    lw_hat = np.delete(np.delete(np.asarray(cost.lw), ref, axis=0), ref, axis=1)
    pairs = [e.pair for e in network.edges]
    susceptances = [e.b for e in network.edges]

    if seed is not None:
        base = list(seed.edge_indices)
        if len(base) > k:
            raise InfeasibleError(f"seed already has {len(base)} edges, budget is {k}")
        if not is_connected(network, base):
            raise ValidationError("augmentation seed must be connected")
        pool = sorted(set(range(m)) - set(base))
        r = k - len(base)
        n_subsets = math.comb(len(pool), r)
        if n_subsets > cap:
            raise InfeasibleError(
                f"optimal augmentation needs {n_subsets} subsets, above the cap of {cap}"
            )
        candidates = (tuple(base) + extra for extra in itertools.combinations(pool, r))
        need_connectivity = False
        total = n_subsets
    else:
        total = math.comb(m, k)
        if total > cap:
            raise InfeasibleError(
                f"global brute force needs {total} subsets, above the cap of {cap}"
            )
        candidates = itertools.combinations(range(m), k)
        need_connectivity = True

    best_cost = np.inf
    best_subset: tuple[int, ...] | None = None
    for subset in candidates:
        if need_connectivity and not _connected_subset(n, subset, pairs):
            continue
        c = _reduced_cost(n, ref, subset, pairs, susceptances, lw_hat)
        if c < best_cost:
            best_cost = c
            best_subset = subset
    if best_subset is None:
        raise InfeasibleError(f"no connected selection of {k} edges exists")
    topology = Topology(tuple(sorted(best_subset)))
    h2 = (best_cost + frequency_penalty(cost, network)) / (2.0 * network.damping)
    return MeshDesignResult(
        topology=topology, cost=float(best_cost), h2_squared=float(h2), seed=seed
    )


def _connected_subset(n: int, indices: Sequence[int], pairs: Sequence[tuple[int, int]]) -> bool:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    components = n
    for ei in indices:
        i, j = pairs[ei]
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            components -= 1
    return components == 1


def _reduced_cost(
    n: int,
    ref: int,
    indices: Sequence[int],
    pairs: Sequence[tuple[int, int]],
    susceptances: Sequence[float],
    lw_hat: np.ndarray,
) -> float:
    lap = np.zeros((n - 1, n - 1))
    for ei in indices:
        i, j = pairs[ei]
        b = susceptances[ei]
        pi = -1 if i == ref else (i - 1 if i > ref else i)
        pj = -1 if j == ref else (j - 1 if j > ref else j)
        if pi >= 0:
            lap[pi, pi] += b
        if pj >= 0:
            lap[pj, pj] += b
        if pi >= 0 and pj >= 0:
            lap[pi, pj] -= b
            lap[pj, pi] -= b
    return float(np.trace(cho_solve(cho_factor(lap), lw_hat)))
