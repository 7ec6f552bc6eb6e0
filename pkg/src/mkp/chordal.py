"""Chordal extensions by greedy fill-in, and the clique bookkeeping built on them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .graph import Edge, WeightedGraph, adjacency, normalize_edge

Clique = tuple[int, ...]


@dataclass(frozen=True)
class ChordalDecomposition:
    """A chordal extension ``(V, F)`` of ``base`` with its maximal cliques.

    ``order`` is the elimination sequence, ``recorded`` the clique formed by
    each eliminated vertex and its remaining neighbours, and ``cliques`` the
    inclusion-maximal members of ``recorded`` with at least two vertices.
    """

    base: WeightedGraph
    F: tuple[Edge, ...]
    order: tuple[int, ...]
    recorded: tuple[Clique, ...]
    cliques: tuple[Clique, ...]

    @property
    def n(self):
        return self.base.n

    @property
    def fill_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.F if e not in self.base.weights)

    @property
    def max_clique_size(self):
        return max((len(c) for c in self.cliques), default=0)

    def adjacency(self):
        return adjacency(self.n, self.F)


@dataclass(frozen=True)
class ChordalityResult:
    chordal: bool
    cycle: tuple[int, ...] | None = None

    def __bool__(self):
        return self.chordal


def fill_in(adj, v) -> int:
    """Number of non-adjacent pairs among the neighbours of ``v``."""
    nbrs = sorted(adj[v])
    return sum(1 for a, b in combinations(nbrs, 2) if b not in adj[a])


def greedy_fill_in(g: WeightedGraph) -> ChordalDecomposition:
    """Eliminate the vertex of smallest fill-in (ties: smallest label) until
    one vertex is left, turning each eliminated neighbourhood into a clique."""
    h = g.adjacency()
    F = set(g.weights)
    order = []
    recorded = []
    while len(h) >= 2:
        v = min(h, key=lambda u: (fill_in(h, u), u))
        nbrs = h[v]
        for a, b in combinations(sorted(nbrs), 2):
            if b not in h[a]:
                h[a].add(b)
                h[b].add(a)
                F.add((a, b))
        recorded.append(tuple(sorted(nbrs | {v})))
        order.append(v)
        for u in nbrs:
            h[u].discard(v)
        del h[v]
    order.extend(h)
    return ChordalDecomposition(
        base=g,
        F=tuple(sorted(F)),
        order=tuple(order),
        recorded=tuple(recorded),
        cliques=tuple(extract_maximal_cliques(recorded)),
    )


def extract_maximal_cliques(recorded: Iterable[Iterable[int]]) -> list[Clique]:
    """Drop every recorded set contained in another one (and sets below size 2)."""
    sets = {frozenset(c) for c in recorded if len(set(c)) >= 2}
    by_size = sorted(sets, key=len, reverse=True)
    keep = []
    for s in by_size:
        if not any(s < t for t in keep):
            keep.append(s)
    return sorted(tuple(sorted(s)) for s in keep)


def _mcs_order(adj):
    """Maximum cardinality search; returns vertices in visit order."""
    weight = {v: 0 for v in adj}
    visited = []
    left = set(adj)
    while left:
        v = max(sorted(left), key=lambda u: weight[u])
        left.remove(v)
        visited.append(v)
        for u in adj[v]:
            if u in left:
                weight[u] += 1
    return visited


def _is_peo(adj, peo):
    """Check that each vertex's later neighbours in ``peo`` form a clique."""
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [u for u in adj[v] if pos[u] > pos[v]]
        if not later:
            continue
        parent = min(later, key=pos.__getitem__)
        rest = [u for u in later if u != parent]
        if any(u not in adj[parent] for u in rest):
            return False
    return True


def _chordless_cycle(adj):
    """A chordless cycle of length >= 4 through the first possible vertex."""
    for v in sorted(adj):
        nbrs = sorted(adj[v])
        for u, w in combinations(nbrs, 2):
            if w in adj[u]:
                continue
            blocked = (adj[v] - {u, w}) | {v}
            prev = {u: None}
            queue = deque([u])
            while queue and w not in prev:
                x = queue.popleft()
                for y in sorted(adj[x]):
                    if y not in prev and y not in blocked:
                        prev[y] = x
                        queue.append(y)
            if w in prev:
                path = []
                x = w
                while x is not None:
                    path.append(x)
                    x = prev[x]
                return (v,) + tuple(reversed(path))
    return None


def is_chordal(n, edges: Iterable[Edge]) -> ChordalityResult:
    """Chordality via a perfect-elimination check of the reversed MCS order.

    On failure the result carries a chordless cycle ``(v, u, ..., w)``.
    """
    adj = adjacency(n, edges)
    peo = list(reversed(_mcs_order(adj)))
    if _is_peo(adj, peo):
        return ChordalityResult(True)
    return ChordalityResult(False, _chordless_cycle(adj))


def clique_containing(adj, u, v) -> Clique:
    """``{u, v}`` plus the common neighbourhood; the unique maximal clique
    containing the edge when the graph is chordal."""
    if v not in adj[u]:
        raise ValueError(f"{normalize_edge(u, v)} is not an edge")
    return tuple(sorted({u, v} | (adj[u] & adj[v])))


def maximal_clique_containing(decomp: ChordalDecomposition, u, v) -> Clique:
    return clique_containing(decomp.adjacency(), u, v)


def dedupe_tuples(cliques: Sequence[Iterable[int]], k) -> tuple[list[Clique], list[Clique]]:
    """Distinct 3-subsets and ``(k+1)``-subsets of the given cliques, sorted."""
    triangles = set()
    groups = set()
    for c in cliques:
        c = sorted(c)
        if len(c) >= 3:
            triangles.update(combinations(c, 3))
        if len(c) >= k + 1:
            groups.update(combinations(c, k + 1))
    return sorted(triangles), sorted(groups)


def naive_tuples(cliques: Sequence[Iterable[int]], k) -> tuple[list[Clique], list[Clique]]:
    """Per-clique subsets with repeats, in clique order."""
    triangles, groups = [], []
    for c in cliques:
        c = sorted(c)
        triangles.extend(combinations(c, 3))
        groups.extend(combinations(c, k + 1))
    return triangles, groups


def clique_row_bound(cliques, k) -> int:
    """Row count of the clique model before deduplication."""
    return sum(3 * comb(len(c), 3) for c in cliques if len(c) >= 3) + sum(
        comb(len(c), k + 1) for c in cliques if len(c) >= k + 1
    )
