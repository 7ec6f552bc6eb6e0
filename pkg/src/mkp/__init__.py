"""Minimum k-partition formulations built on chordal decompositions of sparse graphs."""

__version__ = "0.1.0"

from .assignment import EdgeAssignment, Partition, partition_from_edges, partition_to_edges
from .chordal import ChordalDecomposition, greedy_fill_in, is_chordal
from .completion import complete_solution, gram_certificate, unit_vectors
from .estimators import ChordalExtension, Formulation, MinKPartition
from .graph import WeightedGraph, emit_graph, parse_graph
from .models import (
    build_clique_ilp,
    build_clique_isdp,
    build_edge_model,
    build_isdp,
    build_node_edge_model,
    model_size,
)
from .solver import branch_and_bound_solve, brute_force_solve

__all__ = [
    "ChordalDecomposition",
    "ChordalExtension",
    "EdgeAssignment",
    "Formulation",
    "MinKPartition",
    "Partition",
    "WeightedGraph",
    "branch_and_bound_solve",
    "brute_force_solve",
    "build_clique_ilp",
    "build_clique_isdp",
    "build_edge_model",
    "build_isdp",
    "build_node_edge_model",
    "complete_solution",
    "emit_graph",
    "gram_certificate",
    "greedy_fill_in",
    "is_chordal",
    "model_size",
    "parse_graph",
    "partition_from_edges",
    "partition_to_edges",
    "unit_vectors",
]
