"""Exact desk-scale solvers, feasibility checks, PSD testing and the gap metric.

Both search routines walk the same tree: vertices ``1..n`` in order, vertex
``v`` takes a colour already in use or the next unused one (restricted growth
strings), at most ``k`` colours.  Weights are rescaled to integers so sums and
comparisons are exact.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional

import numpy as np

from .assignment import EdgeAssignment, Partition, partition_from_edges, partition_to_edges
from .chordal import ChordalDecomposition, dedupe_tuples
from .completion import map_y_to_x
from .graph import WeightedGraph, all_pairs, normalize_edge
from .models import SdpModel

BRUTE_FORCE_MAX_N = 14
PSD_TOL = 1e-9

__all__ = [
    "Partition",
    "SolveResult",
    "Verdict",
    "objective",
    "partition_to_edges",
    "partition_from_edges",
    "brute_force_solve",
    "branch_and_bound_solve",
    "check_feasible_edge_model",
    "check_feasible_clique_model",
    "is_psd",
    "verify_isdp_point",
    "gap",
]


@dataclass
class SolveResult:
    optimum: Fraction
    partition: Partition
    nodes_explored: int
    elapsed: float

    def to_json(self):
        return {
            "optimum": _json_number(self.optimum),
            "color": list(self.partition.color),
            "k": self.partition.k,
            "nodes": self.nodes_explored,
            "seconds": round(self.elapsed, 6),
        }


def _json_number(q):
    return q.numerator if q.denominator == 1 else float(q)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a feasibility check; falsy on failure.

    ``row`` names the first violated row (``tri_h_i_j``, ``clq_...``) or the
    failing PSD block (``block_r``); ``vertices`` lists the vertices involved.
    """

    ok: bool
    row: Optional[str] = None
    vertices: tuple[int, ...] = field(default=())

    def __bool__(self):
        return self.ok

    def to_json(self):
        out = {"feasible": self.ok}
        if not self.ok:
            out["violated"] = self.row
            out["vertices"] = list(self.vertices)
        return out


def objective(g: WeightedGraph, p: Partition) -> Fraction:
    """Total weight of edges whose endpoints share a colour."""
    return sum((w for (i, j), w in g.weights.items() if p.of(i) == p.of(j)), Fraction(0))


def _scaled(g):
    """Integer weights plus the common denominator."""
    scale = lcm(*(w.denominator for w in g.weights.values())) if g.weights else 1
    back = {v: [] for v in g.vertices}
    for (i, j), w in g.weights.items():
        back[j].append((i, int(w * scale)))
    return back, scale


def _check_k(g, k):
    if not 2 <= k <= g.n:
        raise ValueError(f"k must satisfy 2 <= k <= n={g.n}, got {k}")


def _search(g, k, prune):
    back, scale = _scaled(g)
    n = g.n
    # neg_rest[v]: negative weight on edges whose later endpoint is >= v
    neg_rest = [0] * (n + 2)
    for v in range(n, 0, -1):
        neg_rest[v] = neg_rest[v + 1] + sum(w for _, w in back[v] if w < 0)
    color = [0] * (n + 1)
    best = [None, None]
    nodes = 0

    def visit(v, used, cost):
        nonlocal nodes
        if v > n:
            if best[0] is None or cost < best[0]:
                best[0], best[1] = cost, tuple(color[1:])
            return
        if prune and best[0] is not None and cost + neg_rest[v] >= best[0]:
            return
        for c in range(1, min(used + 1, k) + 1):
            nodes += 1
            color[v] = c
            delta = 0
            for u, w in back[v]:
                if color[u] == c:
                    delta += w
            visit(v + 1, max(used, c), cost + delta)
        color[v] = 0

    start = time.perf_counter()
    if n == 0:
        return SolveResult(Fraction(0), Partition(k, ()), 0, 0.0)
    visit(1, 0, 0)
    elapsed = time.perf_counter() - start
    return SolveResult(Fraction(best[0], scale), Partition(k, best[1]), nodes, elapsed)


def brute_force_solve(g: WeightedGraph, k: int) -> SolveResult:
    """Enumerate every partition into at most ``k`` blocks.

    Ties go to the lexicographically smallest restricted growth string.
    """
    if g.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}")
    _check_k(g, k)
    return _search(g, k, prune=False)


def branch_and_bound_solve(g: WeightedGraph, k: int) -> SolveResult:
    """Depth-first search pruned by ``cost + (negative weight still undecided)``.

    Subtrees that can only tie are pruned, so the returned partition is the
    same one brute force reports.
    """
    _check_k(g, k)
    return _search(g, k, prune=True)


def check_feasible_edge_model(x, n: int, k: int) -> Verdict:
    """Triangle and clique rows of the edge model over all vertex pairs.

    Once every triangle row holds, ``x = 1`` is an equivalence relation and a
    clique row fails exactly when there are more than ``k`` classes, so the
    clique rows are checked through the class count.
    """
    pairs = all_pairs(n)
    missing = [e for e in pairs if e not in x]
    if missing:
        raise ValueError(f"assignment lacks edge {missing[0]}")
    verdict = _check_triangles(x, combinations(range(1, n + 1), 3))
    if not verdict:
        return verdict
    return _check_classes(x, tuple(range(1, n + 1)), k)


def _check_triangles(x, triples):
    for a, b, c in triples:
        for apex, p, q in ((a, b, c), (b, a, c), (c, a, b)):
            if x[normalize_edge(apex, p)] + x[normalize_edge(apex, q)] - x[(p, q)] > 1:
                return Verdict(False, f"tri_{apex}_{p}_{q}", (a, b, c))
    return Verdict(True)


def _check_classes(x, vertices, k):
    sub = {(i, j): x[(i, j)] for i, j in combinations(vertices, 2)}
    reps = []
    for v in vertices:
        if not any(sub[normalize_edge(r, v)] for r in reps):
            reps.append(v)
            if len(reps) == k + 1:
                q = tuple(sorted(reps))
                return Verdict(False, "clq_" + "_".join(map(str, q)), q)
    return Verdict(True)


def check_feasible_clique_model(x_F, decomp: ChordalDecomposition, k: int) -> Verdict:
    """Triangle and clique rows restricted to the maximal cliques of ``decomp``."""
    missing = [e for e in decomp.F if e not in x_F]
    if missing:
        raise ValueError(f"assignment lacks edge {missing[0]}")
    triples, _ = dedupe_tuples(decomp.cliques, k)
    verdict = _check_triangles(x_F, triples)
    if not verdict:
        return verdict
    for clique in decomp.cliques:
        if len(clique) >= k + 1:
            verdict = _check_classes(x_F, clique, k)
            if not verdict:
                return verdict
    return Verdict(True)


def is_psd(M, tol=PSD_TOL) -> bool:
    """Positive semidefiniteness by symmetric elimination with diagonal pivoting.

    At each step the largest remaining diagonal entry is the pivot.  A pivot
    below ``-tol`` fails; once every remaining diagonal entry is within
    ``tol`` of zero, the remainder must vanish entrywise.
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(A, A.T, atol=tol, rtol=0):
        raise ValueError("matrix is not symmetric")
    A = (A + A.T) / 2
    while A.shape[0]:
        d = np.diag(A)
        p = int(np.argmax(d))
        pivot = d[p]
        if pivot < -tol:
            return False
        if pivot <= tol:
            return bool(np.all(np.abs(A) <= tol))
        col = A[:, p]
        A = A - np.outer(col, col) / pivot
        keep = np.arange(A.shape[0]) != p
        A = A[np.ix_(keep, keep)]
    return True


def block_matrix(block, values):
    """Dense matrix of an SDP block at the given scalar values."""
    M = np.zeros((block.dim, block.dim))
    for (a, b), v in block.constant.items():
        M[a - 1, b - 1] += float(v)
    for s, entries in block.terms.items():
        for (a, b), v in entries.items():
            M[a - 1, b - 1] += float(v) * values[s]
    return M + np.triu(M, 1).T


def verify_isdp_point(y, model: SdpModel, k: int, tol=PSD_TOL) -> Verdict:
    """Map binary ``y`` to ``X`` values and test each block for PSD."""
    values = []
    for s in model.scalars:
        if s.edge not in y:
            raise ValueError(f"assignment lacks edge {s.edge}")
        values.append(float(map_y_to_x(y[s.edge], k)))
    for r, block in enumerate(model.blocks, start=1):
        if not is_psd(block_matrix(block, values), tol):
            return Verdict(False, f"block_{r}", block.vertices)
    return Verdict(True)


def gap(optimum, lower_bound) -> Optional[float]:
    """Relative optimality gap in percent; None when the optimum is zero.

    The denominator is ``|optimum|`` so the gap stays nonnegative for the
    negative optima of spin-glass instances.
    """
    optimum, lower_bound = float(optimum), float(lower_bound)
    if optimum == 0:
        return None
    return (optimum - lower_bound) / abs(optimum) * 100
