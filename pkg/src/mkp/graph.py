"""Weighted graphs, the ``.wg`` text format and random instance generators.

Vertices are labelled ``1..n``.  Edges are ``(i, j)`` tuples with ``i < j`` and
weights are kept as :class:`fractions.Fraction` so objective values stay exact.

Randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence(seed, spawn_key=stream)``.  Each generator documents which
``stream`` tuples it consumes, so an instance is a pure function of
``(family, parameters, seed)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from ._numbers import format_number, to_fraction
from .exceptions import GeneratorError, GraphFormatError

Edge = tuple[int, int]

SPINGLASS_SCALE = 10**5
RNDGRAPH_MAX_ATTEMPTS = 1000


def normalize_edge(i, j) -> Edge:
    i, j = int(i), int(j)
    return (i, j) if i < j else (j, i)


def all_pairs(n) -> list[Edge]:
    """Edges of the complete graph on ``1..n`` in sorted order."""
    return list(combinations(range(1, n + 1), 2))


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected simple graph on vertices ``1..n`` with exact edge weights."""

    n: int
    weights: Mapping[Edge, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        clean = {}
        for (a, b), w in self.weights.items():
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            e = normalize_edge(a, b)
            if not (1 <= e[0] and e[1] <= self.n):
                raise ValueError(f"edge {e} has an endpoint outside 1..{self.n}")
            if e in clean:
                raise ValueError(f"duplicate edge {e}")
            clean[e] = to_fraction(w)
        object.__setattr__(self, "weights", dict(sorted(clean.items())))

    @classmethod
    def from_edges(cls, n, edges: Iterable, default_weight=1):
        """Build from ``(i, j)`` or ``(i, j, w)`` tuples."""
        weights = {}
        for item in edges:
            i, j = item[0], item[1]
            w = item[2] if len(item) > 2 else default_weight
            e = normalize_edge(i, j)
            if e in weights:
                raise ValueError(f"duplicate edge {e}")
            weights[e] = w
        return cls(n, weights)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self.weights)

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def weight(self, i, j) -> Fraction:
        return self.weights[normalize_edge(i, j)]

    def has_edge(self, i, j) -> bool:
        return normalize_edge(i, j) in self.weights

    def adjacency(self) -> dict[int, set[int]]:
        return adjacency(self.n, self.weights)

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m})"


def adjacency(n, edges: Iterable[Edge]) -> dict[int, set[int]]:
    adj = {v: set() for v in range(1, n + 1)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    return adj


def parse_graph(text: str) -> WeightedGraph:
    """Parse ``.wg`` text: header ``n m`` then ``m`` lines ``i j w``.

    Blank lines and lines starting with ``#`` are skipped.  Errors carry the
    1-based line number of the offending line.
    """
    header = None
    weights: dict[Edge, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise GraphFormatError("header must be 'n m'", lineno)
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError("header values must be integers", lineno) from None
            if n < 0 or m < 0:
                raise GraphFormatError("header values must be nonnegative", lineno)
            header = (n, m)
            continue
        n, m = header
        if len(parts) != 3:
            raise GraphFormatError("edge line must be 'i j w'", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError("vertex indices must be integers", lineno) from None
        try:
            w = Fraction(parts[2])
        except (ValueError, ZeroDivisionError):
            raise GraphFormatError(f"bad weight literal {parts[2]!r}", lineno) from None
        if i == j:
            raise GraphFormatError(f"self-loop at vertex {i}", lineno)
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphFormatError(f"vertex index out of range 1..{n}", lineno)
        e = normalize_edge(i, j)
        if e in weights:
            raise GraphFormatError(f"duplicate edge {e[0]} {e[1]}", lineno)
        if len(weights) == m:
            raise GraphFormatError(f"more than the declared {m} edges", lineno)
        weights[e] = w
    if header is None:
        raise GraphFormatError("missing 'n m' header")
    if len(weights) != header[1]:
        raise GraphFormatError(f"declared {header[1]} edges, found {len(weights)}")
    return WeightedGraph(header[0], weights)


def emit_graph(g: WeightedGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{i} {j} {format_number(w)}" for (i, j), w in g.weights.items())
    return "\n".join(lines)


def read_graph(path) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: WeightedGraph, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_graph(g) + "\n")


def is_connected(g: WeightedGraph) -> bool:
    if g.n <= 1:
        return True
    adj = g.adjacency()
    seen = {1}
    queue = deque([1])
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == g.n


def _rng(seed, *stream) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=stream)))


def _signs(rng, count):
    # -1 with probability 1/2, in edge order
    return [-1 if u < 0.5 else 1 for u in rng.random(count)]


def gen_band(n, k, seed=0) -> WeightedGraph:
    """Band graph: ``{i, j}`` is an edge iff ``0 < j - i <= k + 1``.  Stream ``(0,)``."""
    if n < 2 or k < 2:
        raise ValueError("band graphs need n >= 2 and k >= 2")
    width = k + 1
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, min(n, i + width) + 1)]
    signs = _signs(_rng(seed, 0), len(edges))
    return WeightedGraph(n, dict(zip(edges, signs)))


def _torus_edges(rows, cols):
    """Candidate torus edges in generation order, parallels included."""
    out = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c + 1
            out.append((v, r * cols + (c + 1) % cols + 1))
            out.append((v, ((r + 1) % rows) * cols + c + 1))
    return out


def _torus_graph(rows, cols, draws):
    weights = {}
    for (a, b), w in zip(_torus_edges(rows, cols), draws):
        e = normalize_edge(a, b)
        weights.setdefault(e, w)  # wrap-around parallels keep the first weight
    return WeightedGraph(rows * cols, weights)


def gen_spinglass2g(rows, cols, seed=0) -> WeightedGraph:
    """Toroidal grid with Gaussian couplings scaled by 10^5 and rounded.

    Stream ``(0,)``; an exact zero is redrawn from the same stream.
    """
    if rows < 2 or cols < 2:
        raise ValueError("spin glass grids need rows >= 2 and cols >= 2")
    rng = _rng(seed, 0)
    draws = []
    for _ in range(2 * rows * cols):
        w = 0
        while w == 0:
            w = int(np.rint(rng.standard_normal() * SPINGLASS_SCALE))
        draws.append(w)
    return _torus_graph(rows, cols, draws)


def gen_spinglass2pm(rows, cols, seed=0) -> WeightedGraph:
    """Toroidal grid with independent +-1 couplings.  Stream ``(0,)``."""
    if rows < 2 or cols < 2:
        raise ValueError("spin glass grids need rows >= 2 and cols >= 2")
    return _torus_graph(rows, cols, _signs(_rng(seed, 0), 2 * rows * cols))


def gen_rndgraph(n, density=0.1, seed=0) -> WeightedGraph:
    """Erdos-Renyi graph with unit weights, redrawn until connected.

    Attempt ``a`` uses stream ``(a,)``; gives up after 1000 attempts.
    """
    if n < 2:
        raise ValueError("rndgraph needs n >= 2")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    pairs = all_pairs(n)
    for attempt in range(RNDGRAPH_MAX_ATTEMPTS):
        draws = _rng(seed, attempt).random(len(pairs))
        g = WeightedGraph(n, {e: 1 for e, u in zip(pairs, draws) if u < density})
        if is_connected(g):
            return g
    raise GeneratorError(
        f"no connected graph with n={n}, density={density} after {RNDGRAPH_MAX_ATTEMPTS} attempts"
    )


GENERATORS = {
    "band": gen_band,
    "spinglass2g": gen_spinglass2g,
    "spinglass2pm": gen_spinglass2pm,
    "rndgraph": gen_rndgraph,
}
