"""Partitions, 0/1 edge assignments, the maps between them and their JSON forms."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph import Edge, normalize_edge


@dataclass(frozen=True)
class Partition:
    """Colour ``color[v-1]`` in ``1..k`` for each vertex ``v``; colours may go unused."""

    k: int
    color: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "color", tuple(int(c) for c in self.color))
        bad = [c for c in self.color if not 1 <= c <= self.k]
        if bad:
            raise ValueError(f"colours must lie in 1..{self.k}, got {bad[0]}")

    @property
    def n(self):
        return len(self.color)

    def of(self, v) -> int:
        return self.color[v - 1]

    def blocks(self) -> list[tuple[int, ...]]:
        groups = {}
        for v, c in enumerate(self.color, start=1):
            groups.setdefault(c, []).append(v)
        return [tuple(groups[c]) for c in sorted(groups)]

    def to_json(self):
        return {"k": self.k, "color": list(self.color)}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["k"]), tuple(data["color"]))


class EdgeAssignment(Mapping):
    """Read-only map from edges ``(i, j)``, ``i < j``, to bits, in sorted edge order."""

    def __init__(self, values: Mapping | Iterable = ()):
        items = values.items() if isinstance(values, Mapping) else values
        clean = {}
        for (i, j), bit in items:
            bit = int(bit)
            if bit not in (0, 1):
                raise ValueError(f"edge ({i}, {j}) has non-binary value {bit}")
            clean[normalize_edge(i, j)] = bit
        self._values = dict(sorted(clean.items()))

    def __getitem__(self, edge):
        return self._values[normalize_edge(*edge)]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict(self._values) == {normalize_edge(*e): int(v) for e, v in other.items()}
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._values.items()))

    def __repr__(self):
        return f"EdgeAssignment({self._values!r})"

    @property
    def domain(self) -> tuple[Edge, ...]:
        return tuple(self._values)

    def restrict(self, edges: Iterable[Edge]) -> "EdgeAssignment":
        return EdgeAssignment({e: self[e] for e in edges})

    def as_vector(self) -> tuple[int, ...]:
        return tuple(self._values.values())

    def to_json(self, k):
        return {"k": k, "edges": [[i, j, b] for (i, j), b in self._values.items()]}

    @classmethod
    def from_json(cls, data):
        return cls({(int(i), int(j)): int(b) for i, j, b in data["edges"]})


def partition_to_edges(p: Partition, domain: Iterable[Edge]) -> EdgeAssignment:
    """Bit 1 on ``{i, j}`` exactly when ``i`` and ``j`` share a colour."""
    return EdgeAssignment({(i, j): int(p.of(i) == p.of(j)) for i, j in domain})


def partition_from_edges(x: Mapping, n: int, k: int | None = None) -> Partition:
    """Recover colours from the connected components of the ``x = 1`` edges.

    Components are numbered by their smallest vertex, so the result is the
    restricted growth string of the partition.
    """
    parent = list(range(n + 1))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for (i, j), bit in x.items():
        if bit:
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    labels = {}
    color = []
    for v in range(1, n + 1):
        root = find(v)
        if root not in labels:
            labels[root] = len(labels) + 1
        color.append(labels[root])
    return Partition(k if k is not None else max(color, default=1), tuple(color))


def load_solution(path):
    """Read assignment or partition JSON; returns (kind, object, k)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "edges" in data:
        return "assignment", EdgeAssignment.from_json(data), data.get("k")
    if "color" in data:
        return "partition", Partition.from_json(data), data.get("k")
    raise ValueError(f"{path}: expected an 'edges' or 'color' field")
