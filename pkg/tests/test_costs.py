import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridtopo import (
    CostSpec,
    DisconnectedError,
    Edge,
    Network,
    ValidationError,
    build_cost,
    build_laplacian,
    h2_squared_closed_form,
    pairwise_cost,
    topology_cost,
)
from conftest import (
    consensus_cost,
    path3_network,
    random_instance,
    triangle_network,
    two_node_network,
)

TOL = 1e-9


class TestBuildCost:
    def test_consensus_three_nodes(self):
        cost = consensus_cost(path3_network())
        np.testing.assert_allclose(cost.lw, [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
        assert not cost.s.any()

    def test_ranked_weights_are_rank_sums(self):
        net = triangle_network()
        cost = build_cost(CostSpec(kind="ranked_consensus", ranks=(2, 1, 1)), net)
        w = cost.pair_weights
        assert w[0, 1] == 3 and w[0, 2] == 3 and w[1, 2] == 2
        np.testing.assert_allclose(cost.lw @ np.ones(3), 0, atol=1e-12)

    def test_frequency(self):
        cost = build_cost(CostSpec(kind="frequency"), path3_network())
        assert not cost.lw.any()
        np.testing.assert_array_equal(cost.s, np.ones(3))

    def test_loss_uses_conductances(self):
        net = Network(
            inertia=(1.0, 1.0, 1.0),
            damping=1.0,
            edges=(Edge(0, 1, b=1.0, g=0.5), Edge(1, 2, b=1.0, g=0.25)),
        )
        cost = build_cost(CostSpec(kind="loss"), net)
        np.testing.assert_allclose(
            cost.lw, [[0.5, -0.5, 0], [-0.5, 0.75, -0.25], [0, -0.25, 0.25]]
        )
        sub = build_cost(CostSpec(kind="loss", loss_edges=((0, 1),)), net)
        assert sub.lw[1, 2] == 0

    def test_loss_without_conductances_rejected(self):
        with pytest.raises(ValidationError):
            build_cost(CostSpec(kind="loss"), path3_network())

    def test_loss_pair_not_a_candidate(self):
        net = Network(
            inertia=(1.0, 1.0, 1.0),
            damping=1.0,
            edges=(Edge(0, 1, b=1.0, g=0.5), Edge(1, 2, b=1.0, g=0.5)),
        )
        with pytest.raises(ValidationError):
            build_cost(CostSpec(kind="loss", loss_edges=((0, 2),)), net)

    def test_ranked_requires_matching_ranks(self):
        net = triangle_network()
        with pytest.raises(ValidationError):
            build_cost(CostSpec(kind="ranked_consensus"), net)
        with pytest.raises(ValidationError):
            build_cost(CostSpec(kind="ranked_consensus", ranks=(1, 2)), net)
        with pytest.raises(ValidationError):
            build_cost(CostSpec(kind="ranked_consensus", ranks=(1, 2, -1)), net)

    def test_custom_validation(self):
        net = two_node_network()
        good = build_cost(
            CostSpec(kind="custom", weights=((0, 2), (2, 0)), s=(1, 0)), net
        )
        assert good.lw[0, 1] == -2 and good.s[0] == 1
        with pytest.raises(ValidationError):
            build_cost(CostSpec(kind="custom", weights=((0, 1), (2, 0)), s=(0, 0)), net)
        with pytest.raises(ValidationError):
            build_cost(CostSpec(kind="custom", weights=((0, -1), (-1, 0)), s=(0, 0)), net)
        with pytest.raises(ValidationError):
            build_cost(CostSpec(kind="custom", weights=((1, 0), (0, 1)), s=(0, 0)), net)
        with pytest.raises(ValidationError):
            build_cost(CostSpec(kind="custom", weights=((0, 1), (1, 0)), s=(0, 0, 0)), net)

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            CostSpec(kind="volts")


class TestTopologyCost:
    def test_two_node_consensus(self):
        net = two_node_network(b=1.0)
        assert topology_cost(consensus_cost(net), build_laplacian(net)) == pytest.approx(
            1.0, abs=TOL
        )

    def test_path3_consensus(self):
        net = path3_network()
        assert topology_cost(consensus_cost(net), build_laplacian(net)) == pytest.approx(
            4.0, abs=TOL
        )

    def test_unit_triangle_consensus(self):
        net = triangle_network()
        assert topology_cost(consensus_cost(net), build_laplacian(net)) == pytest.approx(
            2.0, abs=TOL
        )

    def test_disconnected_rejected(self):
        net = path3_network()
        with pytest.raises(DisconnectedError):
            topology_cost(consensus_cost(net), build_laplacian(net, edges=[0]))

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_reference_node_invariance(self, seed):
        net, spec = random_instance(seed)
        cost = build_cost(spec, net)
        values = [
            topology_cost(cost, build_laplacian(net, ref=r)) for r in range(net.n)
        ]
        assert max(values) - min(values) <= TOL * max(1.0, abs(values[0]))

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_edge_addition_never_increases(self, seed):
        net, spec = random_instance(seed)
        cost = build_cost(spec, net)
        present = {e.pair for e in net.edges}
        absent = [
            (i, j) for i in range(net.n) for j in range(i + 1, net.n) if (i, j) not in present
        ]
        if not absent:
            return
        i, j = absent[seed % len(absent)]
        grown = Network(net.inertia, net.damping, net.edges + (Edge(i, j, b=0.9, g=0.1),))
        before = topology_cost(cost, build_laplacian(net))
        after = topology_cost(cost, build_laplacian(grown))
        assert after <= before + TOL * max(1.0, before)


class TestPairwiseCost:
    def test_two_node_b2(self):
        net = two_node_network(b=2.0)
        assert pairwise_cost(consensus_cost(net), build_laplacian(net)) == pytest.approx(
            0.5, abs=TOL
        )

    def test_tree_is_weighted_path_distance(self):
        net = path3_network(b=(2.0, 0.5))
        # pairs: (0,1)=1/2, (1,2)=2, (0,2)=1/2+2
        expected = 0.5 + 2.0 + 2.5
        assert pairwise_cost(consensus_cost(net), build_laplacian(net)) == pytest.approx(
            expected, abs=TOL
        )

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_matches_trace_route(self, seed):
        net, spec = random_instance(seed)
        cost = build_cost(spec, net)
        lap = build_laplacian(net)
        a = topology_cost(cost, lap)
        b = pairwise_cost(cost, lap)
        assert abs(a - b) <= TOL * max(1.0, abs(a))


class TestClosedFormH2:
    def test_frequency_term_only(self):
        net = two_node_network(inertia=(1.0, 2.0), damping=2.0)
        cost = build_cost(CostSpec(kind="frequency"), net)
        h2 = h2_squared_closed_form(cost, net, build_laplacian(net))
        assert h2 == pytest.approx((1.0 + 0.5) / 4.0, abs=1e-12)

    def test_two_node_consensus(self):
        net = two_node_network(b=1.0)
        h2 = h2_squared_closed_form(consensus_cost(net), net, build_laplacian(net))
        assert h2 == pytest.approx(0.5, abs=TOL)

    def test_unit_triangle_consensus(self):
        net = triangle_network()
        h2 = h2_squared_closed_form(consensus_cost(net), net, build_laplacian(net))
        assert h2 == pytest.approx(1.0, abs=TOL)

    def test_frequency_term_is_topology_independent(self):
        net = triangle_network()
        cost = build_cost(
            CostSpec(kind="custom", weights=tuple(
                tuple(0.0 if i == j else 1.0 for j in range(3)) for i in range(3)
            ), s=(0.7, 0.2, 0.4)), net,
        )
        full = build_laplacian(net)
        tree = build_laplacian(net, edges=[0, 1])
        dh2 = h2_squared_closed_form(cost, net, tree) - h2_squared_closed_form(cost, net, full)
        dcost = (topology_cost(cost, tree) - topology_cost(cost, full)) / (2 * net.damping)
        assert dh2 == pytest.approx(dcost, abs=1e-12)
