"""Topology design for power-grid swing dynamics.

Selects which candidate transmission lines to build, radially or meshed,
so that the squared H2 norm of the linearized swing dynamics under a
chosen quadratic objective is as small as possible. Ships independent
verification routes (Lyapunov Gramian, stochastic simulation, brute-force
enumeration) alongside the design algorithms.
"""

from .costs import (
    CostMatrices,
    CostSpec,
    build_cost,
    h2_squared_closed_form,
    pairwise_cost,
    topology_cost,
)
from .errors import (
    CertificateError,
    DisconnectedError,
    GridTopoError,
    InfeasibleError,
    NumericalError,
    ValidationError,
)
from .experiments import ExperimentReport, ReportRow, minimum_spanning_tree, run_cardinality_sweep, run_gap_table
from .graphs import (
    LaplacianView,
    build_laplacian,
    is_connected,
    median_node,
    shortest_path_tree,
    shortest_paths,
)
from .lyapunov import (
    AmbientEstimate,
    Gramian,
    IdentityReport,
    StateSpace,
    assemble_state_space,
    h2_squared_via_gramian,
    simulate_ambient,
    solve_observability_lyapunov,
    state_space_from_matrices,
    verify_gramian_identities,
)
from .mesh import MeshDesignResult, ReducedCostState, brute_force_mesh, greedy_mesh
from .netfile import fixture_path, gen_case, load_network, save_network
from .network import Edge, Network, Topology
from .trees import (
    RatioCertificate,
    TreeDesignResult,
    best_rooted_tree,
    brute_force_tree,
    certify_ratio,
    gap_bound,
    median_upper_bound,
    tree_cost_by_paths,
)

__version__ = "0.1.0"

__all__ = [
    "AmbientEstimate",
    "CertificateError",
    "CostMatrices",
    "CostSpec",
    "DisconnectedError",
    "Edge",
    "ExperimentReport",
    "Gramian",
    "GridTopoError",
    "IdentityReport",
    "InfeasibleError",
    "LaplacianView",
    "MeshDesignResult",
    "Network",
    "NumericalError",
    "RatioCertificate",
    "ReducedCostState",
    "ReportRow",
    "StateSpace",
    "Topology",
    "TreeDesignResult",
    "ValidationError",
    "assemble_state_space",
    "best_rooted_tree",
    "brute_force_mesh",
    "brute_force_tree",
    "build_cost",
    "build_laplacian",
    "certify_ratio",
    "fixture_path",
    "gap_bound",
    "gen_case",
    "greedy_mesh",
    "h2_squared_closed_form",
    "h2_squared_via_gramian",
    "is_connected",
    "load_network",
    "median_node",
    "median_upper_bound",
    "minimum_spanning_tree",
    "pairwise_cost",
    "run_cardinality_sweep",
    "run_gap_table",
    "save_network",
    "shortest_path_tree",
    "shortest_paths",
    "simulate_ambient",
    "solve_observability_lyapunov",
    "state_space_from_matrices",
    "topology_cost",
    "tree_cost_by_paths",
    "verify_gramian_identities",
]
