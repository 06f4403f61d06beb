import json

import pytest

from gridtopo import (
    CostSpec,
    InfeasibleError,
    ValidationError,
    gen_case,
    is_connected,
    load_network,
    save_network,
)
from gridtopo.netfile import fixture_path, network_from_document

MINIMAL = {
    "schema_version": 1,
    "damping": 1.0,
    "nodes": [{"id": 0, "inertia": 1.0}, {"id": 1, "inertia": 2.0}],
    "edges": [{"from": 0, "to": 1, "b": 2.0}],
    "cost": {"kind": "consensus"},
}


def write_doc(tmp_path, doc, name="net.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_minimal_file_loads(tmp_path):
    net, spec = load_network(write_doc(tmp_path, MINIMAL))
    assert net.n == 2
    assert net.inertia == (1.0, 2.0)
    assert net.edges[0].b == 2.0
    assert spec.kind == "consensus"


@pytest.mark.parametrize(
    "fixture,nodes,edges",
    [("case5.json", 5, 6), ("case8.json", 8, 8), ("case39.json", 39, 38)],
)
def test_bundled_fixtures(fixture, nodes, edges):
    net, spec = load_network(fixture_path(fixture))
    assert net.n == nodes
    assert len(net.edges) == edges
    assert is_connected(net)


@pytest.mark.parametrize(
    "spec",
    [
        CostSpec(kind="frequency"),
        CostSpec(kind="consensus"),
        CostSpec(kind="ranked_consensus", ranks=(1.0, 2.0)),
        CostSpec(kind="loss", loss_edges=((0, 1),)),
        CostSpec(kind="custom", weights=((0.0, 1.5), (1.5, 0.0)), s=(0.5, 0.0)),
    ],
)
def test_save_load_round_trip(tmp_path, spec):
    doc = dict(MINIMAL)
    doc["edges"] = [{"from": 0, "to": 1, "b": 2.0, "g": 0.4}]
    doc["cost"] = {"kind": "frequency"}
    net, _ = load_network(write_doc(tmp_path, doc))
    out = tmp_path / "saved.json"
    save_network(net, spec, out)
    net2, spec2 = load_network(out)
    assert net2 == net
    assert spec2 == spec
    out2 = tmp_path / "saved2.json"
    save_network(net2, spec2, out2)
    assert out.read_text() == out2.read_text()


class TestValidation:
    def test_duplicate_pair_names_nodes(self, tmp_path):
        doc = dict(MINIMAL)
        doc["nodes"] = MINIMAL["nodes"] + [{"id": 2, "inertia": 1.0}]
        doc["edges"] = [
            {"from": 0, "to": 1, "b": 1.0},
            {"from": 1, "to": 2, "b": 1.0},
            {"from": 1, "to": 0, "b": 3.0},
        ]
        with pytest.raises(ValidationError, match="between nodes 0 and 1"):
            load_network(write_doc(tmp_path, doc))

    def test_negative_susceptance(self, tmp_path):
        doc = dict(MINIMAL)
        doc["edges"] = [{"from": 0, "to": 1, "b": -2.0}]
        with pytest.raises(ValidationError, match="susceptance"):
            load_network(write_doc(tmp_path, doc))

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda d: d.update(extra_field=1),
            lambda d: d["nodes"].append({"id": 2, "inertia": 1.0, "color": "red"}),
            lambda d: d["edges"].append({"from": 0, "to": 1, "b": 1.0, "x": 0.1}),
            lambda d: d.update(cost={"kind": "consensus", "ranks": [1, 1]}),
        ],
    )
    def test_unknown_fields_rejected(self, tmp_path, mutate):
        doc = json.loads(json.dumps(MINIMAL))
        mutate(doc)
        with pytest.raises(ValidationError, match="unknown"):
            load_network(write_doc(tmp_path, doc))

    def test_sparse_node_ids_rejected(self, tmp_path):
        doc = dict(MINIMAL)
        doc["nodes"] = [{"id": 0, "inertia": 1.0}, {"id": 5, "inertia": 1.0}]
        with pytest.raises(ValidationError, match="dense"):
            load_network(write_doc(tmp_path, doc))

    def test_disconnected_candidates_rejected(self, tmp_path):
        doc = dict(MINIMAL)
        doc["nodes"] = MINIMAL["nodes"] + [{"id": 2, "inertia": 1.0}]
        with pytest.raises(ValidationError, match="connect"):
            load_network(write_doc(tmp_path, doc))

    def test_wrong_schema_version(self, tmp_path):
        doc = dict(MINIMAL)
        doc["schema_version"] = 99
        with pytest.raises(ValidationError, match="schema_version"):
            load_network(write_doc(tmp_path, doc))

    def test_syntax_error_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "schema_version": 1,,\n}')
        with pytest.raises(ValidationError, match="line 2"):
            load_network(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError, match="cannot read"):
            load_network(tmp_path / "nope.json")

    def test_wrong_rank_count_rejected(self, tmp_path):
        doc = dict(MINIMAL)
        doc["cost"] = {"kind": "ranked_consensus", "ranks": [1.0]}
        with pytest.raises(ValidationError, match="ranks"):
            load_network(write_doc(tmp_path, doc))

    @pytest.mark.parametrize(
        "mutate,match",
        [
            (lambda d: d["edges"].__setitem__(0, {"from": 0, "to": 1, "b": "big"}), "edge 0: b"),
            (lambda d: d["edges"].__setitem__(0, {"from": 0.5, "to": 1, "b": 1.0}), "edge 0: from"),
            (lambda d: d["edges"].__setitem__(0, {"from": True, "to": 1, "b": 1.0}), "edge 0: from"),
            (lambda d: d["nodes"].__setitem__(0, {"id": 0, "inertia": None}), "inertia"),
            (lambda d: d.update(damping="strong"), "damping"),
            (lambda d: d.update(cost={"kind": "ranked_consensus", "ranks": [1, "x"]}), "cost"),
        ],
    )
    def test_non_numeric_values_rejected(self, tmp_path, mutate, match):
        doc = json.loads(json.dumps(MINIMAL))
        mutate(doc)
        with pytest.raises(ValidationError, match=match):
            load_network(write_doc(tmp_path, doc))


class TestGenCase:
    def test_same_seed_same_bytes(self, tmp_path):
        net, spec = load_network(fixture_path("case8.json"))
        outs = []
        for name in ("a.json", "b.json"):
            grown, spec_out = gen_case(net, spec, 10, seed=7)
            path = tmp_path / name
            save_network(grown, spec_out, path)
            outs.append(path.read_text())
        assert outs[0] == outs[1]

    def test_case8_plus_ten_gives_eighteen(self):
        net, spec = load_network(fixture_path("case8.json"))
        grown, _ = gen_case(net, spec, 10, seed=1)
        assert len(grown.edges) == 18
        assert sum(1 for e in grown.edges if e.base) == 8
        assert sum(1 for e in grown.edges if e.base is False) == 10
        assert len({e.pair for e in grown.edges}) == 18

    def test_case39_plus_extras_gives_sixty_six(self):
        net, spec = load_network(fixture_path("case39.json"))
        grown, _ = gen_case(net, spec, 28, seed=2)
        assert len(grown.edges) == 66

    def test_susceptances_stay_in_base_range(self):
        net, spec = load_network(fixture_path("case8.json"))
        lo = min(e.b for e in net.edges)
        hi = max(e.b for e in net.edges)
        grown, _ = gen_case(net, spec, 10, seed=3)
        for e in grown.edges:
            if e.base is False:
                assert lo <= e.b <= hi

    def test_too_many_extras_rejected(self):
        net, spec = load_network(fixture_path("case8.json"))
        free_pairs = 8 * 7 // 2 - 8
        with pytest.raises(InfeasibleError):
            gen_case(net, spec, free_pairs + 1, seed=0)

    def test_generated_instances_differ_by_seed(self):
        net, spec = load_network(fixture_path("case8.json"))
        a, _ = gen_case(net, spec, 10, seed=0)
        b, _ = gen_case(net, spec, 10, seed=1)
        assert {e.pair for e in a.edges} != {e.pair for e in b.edges}


def test_document_round_trip_matches_object():
    net, spec = load_network(fixture_path("case5.json"))
    from gridtopo.netfile import network_to_document

    net2, spec2 = network_from_document(network_to_document(net, spec))
    assert net2 == net and spec2 == spec
