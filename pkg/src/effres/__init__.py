"""Effective resistance for weighted directed graphs."""

from .graph import DiGraph, GraphError, adjacency_matrix, in_degrees, is_balanced, is_undirected, laplacian, out_degrees
from .resistance import (
    GeneralResistance,
    NotConnectedError,
    ResistanceKind,
    ResistancePipeline,
    build_pipeline,
    check_metric,
    covariance_quadrature,
    effective_resistance,
    general_resistance,
    h2_norm,
    kirchhoff_index,
    resistance_matrix,
    resistance_via_reduction,
)
from .structure import analyze_connections, is_connected, prune_trailing_path, reachable_subgraph

__version__ = "0.1.0"

__all__ = [
    "DiGraph",
    "GeneralResistance",
    "GraphError",
    "NotConnectedError",
    "ResistanceKind",
    "ResistancePipeline",
    "adjacency_matrix",
    "analyze_connections",
    "build_pipeline",
    "check_metric",
    "covariance_quadrature",
    "effective_resistance",
    "general_resistance",
    "h2_norm",
    "in_degrees",
    "is_balanced",
    "is_connected",
    "is_undirected",
    "kirchhoff_index",
    "laplacian",
    "out_degrees",
    "prune_trailing_path",
    "reachable_subgraph",
    "resistance_matrix",
    "resistance_via_reduction",
]
