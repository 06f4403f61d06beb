"""Network file format: load, save, and seeded test-case generation.

The on-disk format is a single JSON document. Field names are part of the
package contract:

    {
      "schema_version": 1,
      "damping": 1.0,
      "nodes": [{"id": 0, "inertia": 1.0}, ...],
      "edges": [{"from": 0, "to": 1, "b": 24.3, "g": 0.0, "base": true}, ...],
      "cost": {"kind": "consensus"}
    }

``g`` and ``base`` are optional per edge. Cost kinds take extra keys:
``ranks`` (ranked_consensus), ``weights`` + ``s`` (custom), ``loss_edges``
(loss, a list of [i, j] pairs, defaulting to every candidate edge).
Unknown fields anywhere are rejected. Loading a saved document yields an
identical object, and generation is byte-deterministic per seed.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .costs import CostSpec, build_cost
from .errors import InfeasibleError, ValidationError
from .network import Edge, Network

SCHEMA_VERSION = 1

_TOP_KEYS = {"schema_version", "damping", "nodes", "edges", "cost"}
_NODE_KEYS = {"id", "inertia"}
_EDGE_KEYS = {"from", "to", "b", "g", "base"}
_COST_KEYS = {
    "frequency": {"kind"},
    "consensus": {"kind"},
    "ranked_consensus": {"kind", "ranks"},
    "custom": {"kind", "weights", "s"},
    "loss": {"kind", "loss_edges"},
}


def fixture_path(name: str) -> Path:
    """Path of a bundled example network file."""
    return Path(__file__).resolve().parent / "fixtures" / name


def load_network(path: str | Path) -> tuple[Network, CostSpec]:
    """Parse and validate a network file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: parse error at line {exc.lineno}: {exc.msg}") from exc
    try:
        return network_from_document(doc)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def network_from_document(doc) -> tuple[Network, CostSpec]:
    if not isinstance(doc, dict):
        raise ValidationError("top level must be an object")
    _check_keys(doc, _TOP_KEYS, "top level", required=_TOP_KEYS)
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema_version {doc['schema_version']}")

    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not nodes:
        raise ValidationError("nodes must be a nonempty list")
    inertia_by_id: dict[int, float] = {}
    for pos, node in enumerate(nodes):
        _check_keys(node, _NODE_KEYS, f"node {pos}", required=_NODE_KEYS)
        nid = _as_int(node["id"], f"node {pos}: id")
        if nid in inertia_by_id:
            raise ValidationError(f"node {pos}: duplicate id {nid}")
        inertia_by_id[nid] = _as_number(node["inertia"], f"node {pos}: inertia")
    n = len(inertia_by_id)
    if sorted(inertia_by_id) != list(range(n)):
        raise ValidationError(f"node ids must be dense 0..{n - 1}")
    inertia = tuple(inertia_by_id[i] for i in range(n))

    raw_edges = doc["edges"]
    if not isinstance(raw_edges, list):
        raise ValidationError("edges must be a list")
    edges = []
    for pos, re in enumerate(raw_edges):
        _check_keys(re, _EDGE_KEYS, f"edge {pos}", required={"from", "to", "b"})
        base = re.get("base")
        if base is not None and not isinstance(base, bool):
            raise ValidationError(f"edge {pos}: base must be a boolean")
        edges.append(
            Edge(
                i=_as_int(re["from"], f"edge {pos}: from"),
                j=_as_int(re["to"], f"edge {pos}: to"),
                b=_as_number(re["b"], f"edge {pos}: b"),
                g=_as_number(re.get("g", 0.0), f"edge {pos}: g"),
                base=base,
            )
        )

    spec = _cost_spec_from_block(doc["cost"])
    network = Network(
        inertia=inertia, damping=_as_number(doc["damping"], "damping"), edges=tuple(edges)
    )
    build_cost(spec, network)  # validate the cost block against this network
    return network, spec


def _cost_spec_from_block(block) -> CostSpec:
    if not isinstance(block, dict) or "kind" not in block:
        raise ValidationError("cost block must be an object with a 'kind'")
    kind = block["kind"]
    if kind not in _COST_KEYS:
        raise ValidationError(f"unknown cost kind {kind!r}")
    _check_keys(block, _COST_KEYS[kind], "cost block", required={"kind"})
    try:
        if kind == "ranked_consensus":
            if "ranks" not in block:
                raise ValidationError("ranked_consensus cost needs 'ranks'")
            return CostSpec(kind=kind, ranks=tuple(block["ranks"]))
        if kind == "custom":
            if "weights" not in block or "s" not in block:
                raise ValidationError("custom cost needs 'weights' and 's'")
            return CostSpec(
                kind=kind,
                weights=tuple(tuple(row) for row in block["weights"]),
                s=tuple(block["s"]),
            )
        if kind == "loss":
            loss_edges = block.get("loss_edges")
            if loss_edges is not None:
                loss_edges = tuple(
                    (_as_int(i, "loss edge"), _as_int(j, "loss edge")) for i, j in loss_edges
                )
            return CostSpec(kind=kind, loss_edges=loss_edges)
        return CostSpec(kind=kind)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"cost block: {exc}") from exc


def _check_keys(obj, allowed: set, where: str, required: set) -> None:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ValidationError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ValidationError(f"{where}: missing field(s) {sorted(missing)}")


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{where}: expected an integer, got {value!r}")
    return value


def network_to_document(network: Network, spec: CostSpec) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "damping": network.damping,
        "nodes": [
            {"id": i, "inertia": m} for i, m in enumerate(network.inertia)
        ],
        "edges": [],
        "cost": _cost_block(spec),
    }
    for e in network.edges:
        entry: dict = {"from": e.i, "to": e.j, "b": e.b}
        if e.g != 0.0:
            entry["g"] = e.g
        if e.base is not None:
            entry["base"] = e.base
        doc["edges"].append(entry)
    return doc


def _cost_block(spec: CostSpec) -> dict:
    block: dict = {"kind": spec.kind}
    if spec.kind == "ranked_consensus":
        block["ranks"] = list(spec.ranks)
    elif spec.kind == "custom":
        block["weights"] = [list(row) for row in spec.weights]
        block["s"] = list(spec.s)
    elif spec.kind == "loss" and spec.loss_edges is not None:
        block["loss_edges"] = [[i, j] for i, j in spec.loss_edges]
    return block


def save_network(network: Network, spec: CostSpec, path: str | Path) -> None:
    """Write the canonical JSON form (stable bytes for identical inputs)."""
    text = json.dumps(network_to_document(network, spec), indent=2) + "\n"
    Path(path).write_text(text)


def gen_case(
    network: Network, spec: CostSpec, extra_edge_count: int, seed: int
) -> tuple[Network, CostSpec]:
    """Add seeded random candidate edges to a base network.

    New endpoints are drawn uniformly from the absent node pairs and new
    susceptances uniformly from the [min, max] range of the base edges.
    Base edges are tagged ``base: true`` (existing tags win), additions
    ``base: false``. Deterministic per seed.
    """
    n = network.n
    existing = {e.pair for e in network.edges}
    pool = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in existing]
    if extra_edge_count < 0:
        raise ValidationError("extra edge count must be nonnegative")
    if extra_edge_count > len(pool):
        raise InfeasibleError(
            f"requested {extra_edge_count} extra edges but only {len(pool)} node pairs are free"
        )
    b_values = [e.b for e in network.edges]
    b_lo, b_hi = min(b_values), max(b_values)
    rng = np.random.default_rng(seed)
    chosen = rng.permutation(len(pool))[:extra_edge_count]
    tagged = [
        Edge(e.i, e.j, e.b, e.g, base=e.base if e.base is not None else True)
        for e in network.edges
    ]
    extras = [
        Edge(pool[idx][0], pool[idx][1], b=float(rng.uniform(b_lo, b_hi)), base=False)
        for idx in chosen
    ]
    return Network(network.inertia, network.damping, tuple(tagged + extras)), spec
