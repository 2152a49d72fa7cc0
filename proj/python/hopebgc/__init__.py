"""HOPE and HOPE+ clustering of the target side of a weighted bipartite graph."""

from ._hope import (
    Clustering,
    Graph,
    NumericError,
    ParseError,
    ValidationError,
    accuracy,
    approx_errors,
    ari,
    cluster,
    er_bipartite,
    f1_macro,
    hop_exact,
    hop_lowrank,
    hope,
    hopeplus,
    load_graph,
    nmi,
    parse_graph,
    planted_bipartite,
    q_matrix,
    transition_matrix,
)

__all__ = [
    "Clustering",
    "Graph",
    "NumericError",
    "ParseError",
    "ValidationError",
    "accuracy",
    "approx_errors",
    "ari",
    "cluster",
    "er_bipartite",
    "f1_macro",
    "hop_exact",
    "hop_lowrank",
    "hope",
    "hopeplus",
    "load_graph",
    "nmi",
    "parse_graph",
    "planted_bipartite",
    "q_matrix",
    "transition_matrix",
]
