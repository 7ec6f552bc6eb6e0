"""scikit-learn style front ends.

``ChordalExtension`` fits the greedy fill-in decomposition and transforms a
graph into the 0/1 sparsity pattern of its chordal extension.
``MinKPartition`` is a clusterer: ``fit_predict`` returns one label per
vertex.  Both take a :class:`~mkp.graph.WeightedGraph` or a symmetric weight
matrix.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .chordal import greedy_fill_in
from .models import (
    build_clique_ilp,
    build_clique_isdp,
    build_edge_model,
    build_isdp,
    build_node_edge_model,
    model_size,
)
from .solver import branch_and_bound_solve, brute_force_solve
from .validation import check_graph, check_k


class ChordalExtension(TransformerMixin, BaseEstimator):
    """Greedy fill-in chordal extension.

    Attributes
    ----------
    decomposition_ : ChordalDecomposition
    cliques_ : tuple of tuples
        Maximal cliques of the extension.
    fill_edges_ : tuple of edges
        Edges added to make the graph chordal.
    n_vertices_ : int
    """

    def fit(self, X, y=None):
        g = check_graph(X)
        self.decomposition_ = greedy_fill_in(g)
        self.cliques_ = self.decomposition_.cliques
        self.fill_edges_ = self.decomposition_.fill_edges
        self.n_vertices_ = g.n
        return self

    def transform(self, X):
        """Symmetric 0/1 matrix of the extension's edges."""
        check_is_fitted(self, "decomposition_")
        g = check_graph(X)
        if g != self.decomposition_.base:
            raise ValueError("transform expects the graph the extension was fitted on")
        P = np.zeros((g.n, g.n), dtype=np.int8)
        for i, j in self.decomposition_.F:
            P[i - 1, j - 1] = P[j - 1, i - 1] = 1
        return P


class MinKPartition(ClusterMixin, BaseEstimator):
    """Exact minimum k-partition of a weighted graph.

    Parameters
    ----------
    k : int, default=2
        Maximum number of blocks.
    method : {"bnb", "brute"}, default="bnb"

    Attributes
    ----------
    labels_ : ndarray of shape (n,)
        Zero-based block index per vertex.
    partition_ : Partition
    optimum_ : Fraction
    n_nodes_ : int
        Search nodes visited.
    """

    def __init__(self, k=2, method="bnb"):
        self.k = k
        self.method = method

    def fit(self, X, y=None):
        g = check_graph(X)
        k = check_k(self.k, g.n)
        if self.method == "bnb":
            result = branch_and_bound_solve(g, k)
        elif self.method == "brute":
            result = brute_force_solve(g, k)
        else:
            raise ValueError(f"unknown method {self.method!r}; use 'bnb' or 'brute'")
        self.partition_ = result.partition
        self.optimum_ = result.optimum
        self.n_nodes_ = result.nodes_explored
        self.labels_ = np.asarray(result.partition.color, dtype=int) - 1
        return self


_LINEAR = {
    "edge": build_edge_model,
    "node-edge": build_node_edge_model,
}


class Formulation(BaseEstimator):
    """Builds one of the five MkP models for a graph.

    ``fit`` stores the model in ``model_`` and its counts in ``size_``.

    Parameters
    ----------
    model : {"edge", "node-edge", "clique-ilp", "isdp", "clique-isdp"}
    k : int, default=3
    relax : bool, default=False
    """

    def __init__(self, model="clique-ilp", k=3, relax=False):
        self.model = model
        self.k = k
        self.relax = relax

    def fit(self, X, y=None):
        g = check_graph(X)
        k = check_k(self.k, g.n)
        if self.model in _LINEAR:
            built = _LINEAR[self.model](g, k, relax=self.relax)
        elif self.model == "isdp":
            built = build_isdp(g, k, relax=self.relax)
        elif self.model in ("clique-ilp", "clique-isdp"):
            self.decomposition_ = greedy_fill_in(g)
            builder = build_clique_ilp if self.model == "clique-ilp" else build_clique_isdp
            built = builder(g, self.decomposition_, k, relax=self.relax)
        else:
            raise ValueError(f"unknown model {self.model!r}")
        self.model_ = built
        self.size_ = model_size(built)
        return self
