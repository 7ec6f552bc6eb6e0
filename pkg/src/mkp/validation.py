"""Input validation shared by the estimators."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.utils.validation import check_array

from ._numbers import to_fraction
from .graph import WeightedGraph


def check_graph(X, *, require_connected=False) -> WeightedGraph:
    """Coerce ``X`` to a :class:`WeightedGraph`.

    Accepts a WeightedGraph, or a square symmetric weight matrix (dense or
    scipy sparse) with a zero diagonal.  Vertex ``v`` is row ``v - 1``;
    nonzero off-diagonal entries are edges.
    """
    if isinstance(X, WeightedGraph):
        g = X
    else:
        A = check_array(X, accept_sparse=("csr", "csc", "coo"), dtype=np.float64, ensure_min_samples=1)
        if A.shape[0] != A.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {A.shape}")
        if sp.issparse(A):
            A = A.tocoo()
            entries = {(int(i), int(j)): float(v) for i, j, v in zip(A.row, A.col, A.data) if v != 0}
        else:
            rows, cols = np.nonzero(A)
            entries = {(int(i), int(j)): float(A[i, j]) for i, j in zip(rows, cols)}
        weights = {}
        for (i, j), v in entries.items():
            if i == j:
                raise ValueError(f"nonzero diagonal entry at vertex {i + 1}")
            if entries.get((j, i)) != v:
                raise ValueError(f"weight matrix is not symmetric at ({i + 1}, {j + 1})")
            if i < j:
                weights[(i + 1, j + 1)] = to_fraction(v)
        g = WeightedGraph(A.shape[0], weights)
    if require_connected:
        from .graph import is_connected

        if not is_connected(g):
            raise ValueError("graph must be connected")
    return g


def check_k(k, n):
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise TypeError(f"k must be an integer, got {type(k).__name__}")
    if not 2 <= k <= n:
        raise ValueError(f"k must satisfy 2 <= k <= n={n}, got {k}")
    return int(k)
