"""Grid model: nodes with rotating inertia, uniform damping, candidate lines.

A :class:`Network` describes the *design universe*: every line that could be
built, with its susceptance (and optional conductance), over a fixed node
set. Designs are :class:`Topology` objects, i.e. subsets of the candidate
edge list. All objects are frozen; operations elsewhere in the package treat
them as immutable values and are safe to call concurrently.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class Edge:
    """One candidate line. Endpoints are stored with ``i < j``."""

    i: int
    j: int
    b: float
    g: float = 0.0
    base: bool | None = None

    def __post_init__(self):
        lo, hi = int(self.i), int(self.j)
        if lo == hi:
            raise ValidationError(f"self-loop at node {lo}")
        if lo > hi:
            lo, hi = hi, lo
        object.__setattr__(self, "i", lo)
        object.__setattr__(self, "j", hi)
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "g", float(self.g))

    @property
    def pair(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class Network:
    """Candidate grid: per-node inertia, uniform damping, candidate edges."""

    inertia: tuple[float, ...]
    damping: float
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "inertia", tuple(float(m) for m in self.inertia))
        object.__setattr__(self, "edges", tuple(self.edges))
        n = len(self.inertia)
        if n < 2:
            raise ValidationError(f"need at least 2 nodes, got {n}")
        for idx, m in enumerate(self.inertia):
            if not math.isfinite(m) or m <= 0:
                raise ValidationError(f"node {idx}: inertia must be positive, got {m}")
        if not math.isfinite(self.damping) or self.damping <= 0:
            raise ValidationError(f"damping must be positive, got {self.damping}")
        seen: dict[tuple[int, int], int] = {}
        for idx, e in enumerate(self.edges):
            if not 0 <= e.i < n or not 0 <= e.j < n:
                raise ValidationError(f"edge {idx}: endpoints {e.pair} out of range for {n} nodes")
            if not math.isfinite(e.b) or e.b <= 0:
                raise ValidationError(f"edge {idx} {e.pair}: susceptance must be positive, got {e.b}")
            if not math.isfinite(e.g) or e.g < 0:
                raise ValidationError(f"edge {idx} {e.pair}: conductance must be nonnegative, got {e.g}")
            if e.pair in seen:
                raise ValidationError(
                    f"duplicate candidate edge between nodes {e.i} and {e.j} "
                    f"(indices {seen[e.pair]} and {idx})"
                )
            seen[e.pair] = idx
        if not _reaches_all(n, (e.pair for e in self.edges)):
            raise ValidationError("candidate edge set does not connect all nodes")

    @property
    def n(self) -> int:
        return len(self.inertia)

    @cached_property
    def pair_index(self) -> dict[tuple[int, int], int]:
        """Map from unordered node pair to candidate edge index."""
        return {e.pair: idx for idx, e in enumerate(self.edges)}


@dataclass(frozen=True)
class Topology:
    """A selected edge subset, as sorted indices into ``Network.edges``."""

    edge_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edge_indices", tuple(sorted(self.edge_indices)))

    @property
    def k(self) -> int:
        return len(self.edge_indices)

    @classmethod
    def of(cls, network: Network, indices: Iterable[int]) -> Topology:
        """Validated constructor: indices in range, distinct, k >= N-1."""
        idx = tuple(sorted(int(i) for i in indices))
        m = len(network.edges)
        for i in idx:
            if not 0 <= i < m:
                raise ValidationError(f"edge index {i} out of range (0..{m - 1})")
        if len(set(idx)) != len(idx):
            raise ValidationError("repeated edge index in topology")
        if len(idx) < network.n - 1:
            raise ValidationError(
                f"topology has {len(idx)} edges; a connected design needs at least {network.n - 1}"
            )
        return cls(idx)


def edge_index_list(network: Network, edges: Topology | Sequence[int] | None) -> list[int]:
    """Normalize an edge selection to a list of valid candidate indices."""
    if edges is None:
        return list(range(len(network.edges)))
    if isinstance(edges, Topology):
        return list(edges.edge_indices)
    out = []
    m = len(network.edges)
    for i in edges:
        ii = int(i)
        if not 0 <= ii < m:
            raise ValidationError(f"edge index {i} out of range (0..{m - 1})")
        out.append(ii)
    if len(set(out)) != len(out):
        raise ValidationError("repeated edge index in selection")
    return out


def _reaches_all(n: int, pairs: Iterable[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in pairs:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * n
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
    return count == n
