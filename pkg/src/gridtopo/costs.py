"""Control objectives and the closed-form topology cost.

A :class:`CostSpec` names what the operator cares about (frequency
excursions, line losses, phase consensus, rank-weighted consensus, or a
custom quadratic); :func:`build_cost` turns it into the matrix pair
(weighted Laplacian over phase differences, diagonal frequency weights).
The topology cost Tr(L_w L_b+) is evaluated through the reduced Laplacian,
with an independent pairwise route for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DisconnectedError, ValidationError
from .graphs import LaplacianView, laplacian_from_pairs
from .network import Network

COST_KINDS = ("frequency", "loss", "consensus", "ranked_consensus", "custom")


@dataclass(frozen=True)
class CostSpec:
    """Declarative objective description, serializable to the network file."""

    kind: str
    ranks: tuple[float, ...] | None = None
    weights: tuple[tuple[float, ...], ...] | None = None
    s: tuple[float, ...] | None = None
    loss_edges: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.kind not in COST_KINDS:
            raise ValidationError(f"unknown cost kind {self.kind!r}; expected one of {COST_KINDS}")
        if self.ranks is not None:
            object.__setattr__(self, "ranks", tuple(float(r) for r in self.ranks))
        if self.s is not None:
            object.__setattr__(self, "s", tuple(float(v) for v in self.s))
        if self.weights is not None:
            object.__setattr__(
                self, "weights", tuple(tuple(float(w) for w in row) for row in self.weights)
            )
        if self.loss_edges is not None:
            object.__setattr__(
                self, "loss_edges", tuple((int(i), int(j)) for i, j in self.loss_edges)
            )


@dataclass(frozen=True, eq=False)
class CostMatrices:
    """The objective as matrices: phase-difference Laplacian and frequency diag."""

    lw: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        lw = np.array(self.lw, dtype=float)
        s = np.array(self.s, dtype=float)
        lw.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "lw", lw)
        object.__setattr__(self, "s", s)

    @property
    def n(self) -> int:
        return self.lw.shape[0]

    @cached_property
    def pair_weights(self) -> np.ndarray:
        """Symmetric matrix of pairwise weights w_ij (zero diagonal)."""
        w = -np.array(self.lw)
        np.fill_diagonal(w, 0.0)
        w.setflags(write=False)
        return w


def build_cost(spec: CostSpec, network: Network) -> CostMatrices:
    """Materialize a cost specification for a given network size."""
    n = network.n
    if spec.kind == "frequency":
        return CostMatrices(np.zeros((n, n)), np.ones(n))
    if spec.kind == "consensus":
        return CostMatrices(n * np.eye(n) - np.ones((n, n)), np.zeros(n))
    if spec.kind == "ranked_consensus":
        if spec.ranks is None or len(spec.ranks) != n:
            raise ValidationError(f"ranked consensus needs {n} ranks, got {spec.ranks}")
        r = np.asarray(spec.ranks)
        if np.any(r <= 0):
            raise ValidationError("ranks must be positive")
        w = r[:, None] + r[None, :]
        np.fill_diagonal(w, 0.0)
        return CostMatrices(_laplacian_from_weight_matrix(w), np.zeros(n))
    if spec.kind == "loss":
        if spec.loss_edges is None:
            idx = list(range(len(network.edges)))
        else:
            idx = []
            for i, j in spec.loss_edges:
                pair = (i, j) if i < j else (j, i)
                if pair not in network.pair_index:
                    raise ValidationError(f"loss edge {pair} is not a candidate edge")
                idx.append(network.pair_index[pair])
            if len(set(idx)) != len(idx):
                raise ValidationError("repeated pair in loss edge list")
        pairs = [network.edges[ei].pair for ei in idx]
        conductances = [network.edges[ei].g for ei in idx]
        if sum(conductances) == 0:
            raise ValidationError("loss cost requires nonzero conductances on the loss edges")
        return CostMatrices(laplacian_from_pairs(n, pairs, conductances), np.zeros(n))
    # custom
    if spec.weights is None or spec.s is None:
        raise ValidationError("custom cost needs explicit weights and s")
    w = np.asarray(spec.weights, dtype=float)
    s = np.asarray(spec.s, dtype=float)
    if w.shape != (n, n):
        raise ValidationError(f"custom weights must be {n}x{n}, got {w.shape}")
    if s.shape != (n,):
        raise ValidationError(f"custom s must have length {n}, got {s.shape}")
    if not np.array_equal(w, w.T):
        raise ValidationError("custom weights must be symmetric")
    if np.any(np.diag(w) != 0):
        raise ValidationError("custom weights must have a zero diagonal")
    if np.any(w < 0) or np.any(s < 0):
        raise ValidationError("custom weights and s must be nonnegative")
    return CostMatrices(_laplacian_from_weight_matrix(w), s)


def _laplacian_from_weight_matrix(w: np.ndarray) -> np.ndarray:
    lap = -np.array(w, dtype=float)
    np.fill_diagonal(lap, 0.0)
    np.fill_diagonal(lap, -lap.sum(axis=1))
    return lap


def topology_cost(cost: CostMatrices, lap: LaplacianView) -> float:
    """Tr(L_w L_b+) through the reduced factorization.

    This is the topology-dependent part of the squared H2 norm (times 2d)
    and the quantity every design routine minimizes.
    """
    if not lap.connected:
        raise DisconnectedError("topology cost needs a connected topology")
    if cost.n != lap.n:
        raise ValidationError(f"cost is for {cost.n} nodes, Laplacian for {lap.n}")
    lw_hat = lap.reduce(cost.lw)
    return float(np.trace(lap.solve_reduced(lw_hat)))


def pairwise_cost(cost: CostMatrices, lap: LaplacianView) -> float:
    """Sum over unordered pairs of w_ij times effective inverse susceptance.

    Mathematically identical to :func:`topology_cost`; kept as an
    independent evaluation route for consistency checks.
    """
    if not lap.connected:
        raise DisconnectedError("pairwise cost needs a connected topology")
    w = cost.pair_weights
    total = 0.0
    for i in range(cost.n):
        for j in range(i + 1, cost.n):
            if w[i, j] != 0.0:
                total += w[i, j] * lap.effective_inverse_susceptance(i, j)
    return total


def frequency_penalty(cost: CostMatrices, network: Network) -> float:
    """Topology-independent term: sum of s_i / M_i."""
    return float(np.sum(cost.s / np.asarray(network.inertia)))


def h2_squared_closed_form(cost: CostMatrices, network: Network, lap: LaplacianView) -> float:
    """Squared H2 norm of the swing dynamics under this cost and topology."""
    return (topology_cost(cost, lap) + frequency_penalty(cost, network)) / (2.0 * network.damping)
