"""Exact, seeded tests for generic rigidity and generic global rigidity of graphs."""

from .graph import (
    Graph,
    GraphFormatError,
    complete_graph,
    enumerate_graphs,
    find_cliques,
    parse_edge_list,
    parse_graph6,
    serialize_edge_list,
    serialize_graph6,
)
from .matroid import MatroidOracle, is_rd_connected
from .rigidity import (
    Framework,
    RandomRegime,
    Verdict,
    generic_rank,
    is_generically_rigid,
    rigidity_matrix,
    sample_framework,
)
from .stress import (
    StressMatrix,
    circuit_stress,
    clique_proportionality,
    is_generically_globally_rigid,
    is_minimally_ggr,
    max_rank_stress,
    rank_preserving_perturbation,
    simplex_stress,
    stress_space,
)

__version__ = "0.1.0"
