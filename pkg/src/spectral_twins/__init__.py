"""Isospectral weighted graphs, nodal counts and Neumann quantum graphs."""

from .graph_core import (
    GeneralizedLaplacian,
    WeightedGraph,
    build_graph,
    builtin_7_1,
    combinatorial_laplacian,
    graph_7_1,
    laplacian,
    line_graph,
    polynomial_apply,
)
from .nodal import (
    count_nodal_domains,
    check_bounds,
    interior_rule_7_1,
    isonodal,
    nodal_sequence,
    predicted_total_7_1,
)
from .quantum import (
    MetricGraph,
    Reduced71,
    find_roots,
    metric_from_weighted,
    reduced_secular_7_1,
    regularized_secular,
    vertex_secular_matrix,
)
from .spectra import char_poly, eig_sym, isospectral, verify_transplantation

__version__ = "0.1.0"

__all__ = [
    "GeneralizedLaplacian",
    "MetricGraph",
    "Reduced71",
    "WeightedGraph",
    "build_graph",
    "builtin_7_1",
    "char_poly",
    "check_bounds",
    "combinatorial_laplacian",
    "count_nodal_domains",
    "eig_sym",
    "find_roots",
    "graph_7_1",
    "interior_rule_7_1",
    "isonodal",
    "isospectral",
    "laplacian",
    "line_graph",
    "metric_from_weighted",
    "nodal_sequence",
    "polynomial_apply",
    "predicted_total_7_1",
    "reduced_secular_7_1",
    "regularized_secular",
    "verify_transplantation",
    "vertex_secular_matrix",
]
