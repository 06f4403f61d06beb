"""Seeded random instances shared by the unit and acceptance suites."""

from __future__ import annotations

import numpy as np

from gridtopo import CostSpec, Edge, Network, build_cost, gen_case, load_network
from gridtopo.netfile import fixture_path

ORACLE_COST_KINDS = ("frequency", "loss", "consensus", "ranked_consensus")


def random_instance(
    seed: int, n_nodes: int | None = None, kind: str | None = None
) -> tuple[Network, CostSpec]:
    """A connected random network plus a matching cost spec.

    Node counts 3..12, inertias in [0.5, 2], damping in {0.5, 1, 2},
    susceptances in [0.5, 2.5], conductances in [0.05, 1]. The cost kind
    cycles with the seed unless pinned.
    """
    rng = np.random.default_rng(seed)
    n = int(n_nodes) if n_nodes else int(rng.integers(3, 13))
    inertia = tuple(float(m) for m in rng.uniform(0.5, 2.0, n))
    damping = float(rng.choice([0.5, 1.0, 2.0]))
    pairs = [(int(rng.integers(0, v)), v) for v in range(1, n)]
    present = {(min(p), max(p)) for p in pairs}
    pool = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in present]
    rng.shuffle(pool)
    pairs += pool[: int(rng.integers(0, n))]
    edges = tuple(
        Edge(i, j, b=float(rng.uniform(0.5, 2.5)), g=float(rng.uniform(0.05, 1.0)))
        for i, j in pairs
    )
    network = Network(inertia=inertia, damping=damping, edges=edges)
    if kind is None:
        kind = ORACLE_COST_KINDS[seed % len(ORACLE_COST_KINDS)]
    return network, make_cost_spec(kind, n, rng)


def make_cost_spec(kind: str, n: int, rng: np.random.Generator) -> CostSpec:
    if kind == "ranked_consensus":
        return CostSpec(kind=kind, ranks=tuple(float(r) for r in rng.uniform(0.5, 3.0, n)))
    if kind == "custom":
        w = rng.uniform(0.0, 2.0, (n, n))
        w = np.triu(w, 1)
        w = w + w.T
        return CostSpec(
            kind=kind,
            weights=tuple(tuple(float(x) for x in row) for row in w),
            s=tuple(float(x) for x in rng.uniform(0.0, 1.5, n)),
        )
    return CostSpec(kind=kind)


def random_spanning_tree_indices(network: Network, seed: int) -> list[int]:
    """Uniform-ish random spanning tree of the candidate set (random Kruskal)."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(network.edges))
    parent = list(range(network.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    chosen: list[int] = []
    for ei in order:
        e = network.edges[int(ei)]
        ri, rj = find(e.i), find(e.j)
        if ri != rj:
            parent[ri] = rj
            chosen.append(int(ei))
    return sorted(chosen)


def case18_instance(seed: int) -> tuple[Network, CostSpec]:
    """8-node instance with 8 fixture edges plus 10 seeded random candidates."""
    base, spec = load_network(fixture_path("case8.json"))
    return gen_case(base, spec, 10, seed=seed)


def two_node_network(b: float = 1.0, inertia=(1.0, 1.0), damping: float = 1.0) -> Network:
    return Network(inertia=tuple(inertia), damping=damping, edges=(Edge(0, 1, b=b),))


def path3_network(b=(1.0, 1.0)) -> Network:
    return Network(
        inertia=(1.0, 1.0, 1.0),
        damping=1.0,
        edges=(Edge(0, 1, b=b[0]), Edge(1, 2, b=b[1])),
    )


def triangle_network(b=(1.0, 1.0, 1.0)) -> Network:
    return Network(
        inertia=(1.0, 1.0, 1.0),
        damping=1.0,
        edges=(Edge(0, 1, b=b[0]), Edge(1, 2, b=b[1]), Edge(0, 2, b=b[2])),
    )


def consensus_cost(network: Network):
    return build_cost(CostSpec(kind="consensus"), network)
