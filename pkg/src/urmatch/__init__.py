"""Uniquely restricted matchings in bipartite graphs.

A matching is uniquely restricted when the subgraph induced by its saturated
vertices has exactly one perfect matching. The checks here reduce the
question to acyclicity of a small digraph built from the matching and back
every answer with a certificate.
"""

__version__ = "0.1.0"

from .analysis import (
    AllMaxReport,
    ForcingReport,
    PerfectStatus,
    UrVerdict,
    all_max_ur,
    all_max_ur_fast,
    all_max_ur_oracle,
    is_forcing_set,
    is_uniquely_restricted,
    is_uniquely_restricted_oracle,
    minimum_forcing_set,
    unique_perfect_matching,
)
from .budget import OracleBudget
from .digraph import (
    AcyclicityCertificate,
    BDDigraph,
    ExtendedBDDigraph,
    acyclicity_certificate,
    bd_map,
    count_paths,
    cycle_to_alternating_cycle,
    extended_bd_map,
)
from .discrepancy import DiscrepancyConfig, discrepancy_search
from .errors import BudgetExceeded, GraphFormatError, InvalidMatchingError
from .graph import BipartiteGraph, Side, VertexRef, degree, format_graph, parse_graph, to_dot
from .matching import (
    Matching,
    enumerate_maximum_matchings,
    enumerate_perfect_matchings,
    greedy_matching,
    is_valid_matching,
    maximum_matching,
    parse_matching,
)
from .oracle import count_perfect_matchings, find_alternating_cycle

__all__ = [
    "AcyclicityCertificate",
    "AllMaxReport",
    "BDDigraph",
    "BipartiteGraph",
    "BudgetExceeded",
    "DiscrepancyConfig",
    "ExtendedBDDigraph",
    "ForcingReport",
    "GraphFormatError",
    "InvalidMatchingError",
    "Matching",
    "OracleBudget",
    "PerfectStatus",
    "Side",
    "UrVerdict",
    "VertexRef",
    "acyclicity_certificate",
    "all_max_ur",
    "all_max_ur_fast",
    "all_max_ur_oracle",
    "bd_map",
    "count_paths",
    "count_perfect_matchings",
    "cycle_to_alternating_cycle",
    "degree",
    "discrepancy_search",
    "enumerate_maximum_matchings",
    "enumerate_perfect_matchings",
    "extended_bd_map",
    "find_alternating_cycle",
    "format_graph",
    "greedy_matching",
    "is_forcing_set",
    "is_uniquely_restricted",
    "is_uniquely_restricted_oracle",
    "is_valid_matching",
    "maximum_matching",
    "minimum_forcing_set",
    "parse_graph",
    "parse_matching",
    "to_dot",
    "unique_perfect_matching",
]
