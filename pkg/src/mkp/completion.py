"""Extending clique-model solutions to the complete graph, and PSD certificates.

A 0/1 assignment on the chordal extension ``F`` that satisfies the
clique-restricted triangle and clique rows is grown one missing edge at a
time.  Edges are added in an order that keeps the graph chordal, so each new
edge lies in a unique maximal clique and its value is read off from the
already-fixed edges of that clique.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .assignment import EdgeAssignment, Partition
from .chordal import ChordalDecomposition, clique_containing, is_chordal
from .exceptions import ContractViolation, InfeasibleAssignment
from .graph import Edge, adjacency, all_pairs, normalize_edge

GRAM_TOL = 1e-9
UNIT_TOL = 1e-12


@dataclass(frozen=True)
class GroneSequence:
    """Missing edges in an order that keeps every intermediate graph chordal."""

    n: int
    start: tuple[Edge, ...]
    steps: tuple[Edge, ...]

    def __len__(self):
        return len(self.steps)

    def prefixes(self):
        """Edge sets of the intermediate graphs, starting graph first."""
        edges = list(self.start)
        yield tuple(edges)
        for e in self.steps:
            edges.append(e)
            yield tuple(edges)


def grone_sequence(decomp: ChordalDecomposition) -> GroneSequence:
    return grone_sequence_from_edges(decomp.n, decomp.F)


def grone_sequence_from_edges(n, edges) -> GroneSequence:
    """Repeatedly add the lexicographically first missing edge that keeps
    the graph chordal."""
    current = set(normalize_edge(*e) for e in edges)
    if not is_chordal(n, current):
        raise ValueError("starting graph is not chordal")
    missing = [e for e in all_pairs(n) if e not in current]
    steps = []
    while missing:
        for idx, e in enumerate(missing):
            if is_chordal(n, current | {e}):
                break
        else:  # pragma: no cover - cannot happen for chordal input
            raise ContractViolation("no chordality-preserving edge left")
        current.add(e)
        steps.append(e)
        del missing[idx]
    return GroneSequence(n, tuple(sorted(set(normalize_edge(*e) for e in edges))), tuple(steps))


def extend_one(x: Mapping, adj, edge, k) -> int:
    """Value for the new edge ``{i, j}`` given a feasible assignment ``x``.

    ``adj`` is the chordal graph before the edge is added.  With ``C`` the
    maximal clique of the enlarged graph containing the edge, the value is 1
    when ``C = {i, j}``, when every other member of ``C`` is separated from
    both ends, or when some member shares a block with both; it is 0 when
    some member shares a block with exactly one end.
    """
    i, j = normalize_edge(*edge)
    grown = {v: set(nb) for v, nb in adj.items()}
    grown[i].add(j)
    grown[j].add(i)
    C = clique_containing(grown, i, j)
    others = [h for h in C if h not in (i, j)]
    if not others:
        return 1
    one = two = None
    for h in others:
        s = x[normalize_edge(h, i)] + x[normalize_edge(h, j)]
        if s == 1 and one is None:
            one = h
        elif s == 2 and two is None:
            two = h
    if one is not None and two is not None:
        raise ContractViolation(
            f"infeasible input: vertex {one} shares a block with one end of {(i, j)} "
            f"while vertex {two} shares with both"
        )
    return 0 if one is not None else 1


def complete_solution(x_F: Mapping, decomp: ChordalDecomposition, k) -> EdgeAssignment:
    """Extend a feasible clique-model assignment to every vertex pair.

    Raises :class:`InfeasibleAssignment` naming the violated row when ``x_F``
    does not satisfy the clique-model rows.
    """
    from .solver import check_feasible_clique_model

    verdict = check_feasible_clique_model(x_F, decomp, k)
    if not verdict:
        raise InfeasibleAssignment(f"assignment violates row {verdict.row}", verdict.row)
    x = {e: int(x_F[e]) for e in decomp.F}
    adj = adjacency(decomp.n, decomp.F)
    for e in grone_sequence(decomp).steps:
        x[e] = extend_one(x, adj, e, k)
        adj[e[0]].add(e[1])
        adj[e[1]].add(e[0])
    return EdgeAssignment(x)


def map_y_to_x(y, k) -> Fraction:
    """Co-membership bit to the SDP entry: 1 -> 1, 0 -> -1/(k-1)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return Fraction(-1, k - 1) + Fraction(k, k - 1) * y


def map_x_to_y(x, k, tol=1e-9) -> int:
    if k < 2:
        raise ValueError("k must be at least 2")
    low = -1.0 / (k - 1)
    if abs(float(x) - 1.0) <= tol:
        return 1
    if abs(float(x) - low) <= tol:
        return 0
    raise ValueError(f"{x} is neither 1 nor -1/(k-1) = {low}")


def unit_vectors(k) -> np.ndarray:
    """``k`` unit vectors in ``R^(k-1)`` with pairwise inner product ``-1/(k-1)``.

    Rows are the vertices of a regular simplex: the columns of a Helmert
    basis of the sum-zero subspace, rescaled to unit length.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    H = np.zeros((k - 1, k))
    for r in range(1, k):
        H[r - 1, :r] = 1.0
        H[r - 1, r] = -float(r)
        H[r - 1] /= np.sqrt(r * (r + 1))
    return (H * np.sqrt(k / (k - 1))).T


def _colour_rank(partition: Partition, clique, k):
    used = sorted({partition.of(v) for v in clique})
    if len({partition.of(v) for v in range(1, partition.n + 1)}) > k:
        raise ValueError(f"partition uses more than k={k} colours")
    return {c: r for r, c in enumerate(used)}


def gram_certificate(partition: Partition, clique, k) -> np.ndarray:
    """Matrix ``B`` whose column for vertex ``v`` is the simplex vector of its
    colour; ``B.T @ B`` is the clique's SDP block."""
    rank = _colour_rank(partition, clique, k)
    U = unit_vectors(k)
    return np.column_stack([U[rank[partition.of(v)]] for v in clique]) if clique else np.zeros((k - 1, 0))


def block_from_partition(partition: Partition, clique, k) -> np.ndarray:
    low = -1.0 / (k - 1)
    c = [partition.of(v) for v in clique]
    return np.array([[1.0 if a == b else low for b in c] for a in c])


def psd_check_3x3_violation(x_ij, x_ih, x_jh):
    """Determinant of the 3x3 unit-diagonal block with the given off-diagonals."""
    return 1 + 2 * x_ij * x_ih * x_jh - x_ij**2 - x_ih**2 - x_jh**2
