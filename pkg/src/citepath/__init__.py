"""Concept-evolution trajectories and bibliometric indicators for citation data.

The toolkit turns publication metadata into a knowledge-flow citation network,
weights its arcs by search path count (SPC) or flow-vergence (FV) gradient,
extracts main paths with the classic search schemes, deduplicates them with a
uniqueness index, relabels the survivors by their top concepts and computes a
battery of publication/citation indicators along the way.
"""

from citepath.concepts import ConceptPath, concept_path, top_concept
from citepath.indicators import (
    annual_table,
    cagr,
    entity_table,
    h_index,
)
from citepath.network import (
    CitationNetwork,
    build_network,
    sinks,
    sources,
    validate_acyclic,
)
from citepath.records import PublicationRecord, parse_records
from citepath.search import (
    TrajectoryPath,
    backward_search,
    critical_path,
    forward_search,
    key_route_search_global,
    key_route_search_local,
    key_routes,
    run_scheme,
)
from citepath.selection import select_paths, u_matrix, uniqueness_index
from citepath.weighting import (
    WeightedNetwork,
    eigenvector_centrality,
    fv_gradient,
    fv_index,
    fv_normalize,
    fv_weights,
    spc_weights,
)

__version__ = "0.1.0"

__all__ = [
    "CitationNetwork",
    "ConceptPath",
    "PublicationRecord",
    "TrajectoryPath",
    "WeightedNetwork",
    "annual_table",
    "backward_search",
    "build_network",
    "cagr",
    "concept_path",
    "critical_path",
    "eigenvector_centrality",
    "entity_table",
    "forward_search",
    "fv_gradient",
    "fv_index",
    "fv_normalize",
    "fv_weights",
    "h_index",
    "key_route_search_global",
    "key_route_search_local",
    "key_routes",
    "parse_records",
    "run_scheme",
    "select_paths",
    "sinks",
    "sources",
    "spc_weights",
    "top_concept",
    "u_matrix",
    "uniqueness_index",
    "validate_acyclic",
]
