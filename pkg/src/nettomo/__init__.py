"""Link-delay network tomography with expander certificates."""
from .exceptions import (InfeasibleError, NetTomoError, NotCertifiedError, SizeGuardError,
                         UncoveredLinkError, ValidationError)
from .netgraph import (BipartiteGraph, Network, Path, RoutingMatrix, build_routing_matrix,
                       common_neighbor_matrix, count_walks, to_bipartite)
from .expander import (ExpanderCertificate, certify_1_identifiable, degree_decompose,
                       exhaustive_expander_check, pairwise_conditions)
from .lp import LpProblem, solve_binary_ilp, solve_lp
from .tomo import estimate_delays, error_bound, null_space_basis
from .pathsel import (PathSelection, cover_ilp, identifiability_heuristic,
                      identifiability_ilp, verify_selection)
from .topogen import TopoConfig, generate_topology, make_instance, prune, shortest_path_routing
from .estimators import ExpanderCertifier, L1DelayEstimator, PathSelector

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph", "ExpanderCertificate", "ExpanderCertifier", "InfeasibleError",
    "L1DelayEstimator", "LpProblem", "NetTomoError", "Network", "NotCertifiedError", "Path",
    "PathSelection", "PathSelector", "RoutingMatrix", "SizeGuardError", "TopoConfig",
    "UncoveredLinkError", "ValidationError", "build_routing_matrix", "certify_1_identifiable",
    "common_neighbor_matrix", "count_walks", "cover_ilp", "degree_decompose", "error_bound",
    "estimate_delays", "exhaustive_expander_check", "generate_topology",
    "identifiability_heuristic", "identifiability_ilp", "make_instance", "null_space_basis",
    "pairwise_conditions", "prune", "shortest_path_routing", "solve_binary_ilp", "solve_lp",
    "to_bipartite", "verify_selection",
]
