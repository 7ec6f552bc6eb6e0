"""Solver-agnostic model IR and builders for the five MkP formulations.

Linear models (edge, node-edge, clique ILP) are :class:`LinearModel`; the two
semidefinite ones (full ISDP and clique-block ISDP) are :class:`SdpModel`.
Coefficients are Fractions.  Variable names are ``x_i_j`` for edge variables,
``xn_i_c`` / ``y_i_j`` for the node-edge model.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional

from .chordal import ChordalDecomposition, clique_row_bound, dedupe_tuples, naive_tuples
from .exceptions import RowCapExceeded
from .graph import Edge, WeightedGraph, all_pairs

DEFAULT_ROW_CAP = 10**7
BINARY = "binary"
CONTINUOUS = "continuous"


def row_cap() -> int:
    value = os.environ.get("MKP_ROW_CAP")
    return int(value) if value else DEFAULT_ROW_CAP


def edge_var(i, j) -> str:
    return f"x_{i}_{j}"


def parse_edge_var(name) -> Edge:
    prefix, i, j = name.split("_")
    if prefix != "x":
        raise ValueError(f"{name!r} is not an edge variable")
    return int(i), int(j)


@dataclass
class Variable:
    name: str
    kind: str = BINARY
    lower: Optional[Fraction] = Fraction(0)
    upper: Optional[Fraction] = Fraction(1)


@dataclass
class Constraint:
    name: str
    coeffs: dict[str, Fraction]
    sense: str  # "<=", ">=" or "="
    rhs: Fraction

    def activity(self, values) -> Fraction:
        return sum((c * values[v] for v, c in self.coeffs.items()), Fraction(0))

    def satisfied(self, values) -> bool:
        lhs = self.activity(values)
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class LinearModel:
    name: str
    variables: list[Variable]
    objective: dict[str, Fraction]
    constraints: list[Constraint]
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        known = set(names)
        for v in self.objective:
            if v not in known:
                raise ValueError(f"objective references undeclared variable {v}")
        for row in self.constraints:
            for v in row.coeffs:
                if v not in known:
                    raise ValueError(f"row {row.name} references undeclared variable {v}")

    @property
    def variable_names(self):
        return [v.name for v in self.variables]

    def evaluate(self, values) -> Fraction:
        return self.offset + sum((c * values[v] for v, c in self.objective.items()), Fraction(0))

    def violated(self, values):
        """First violated row, or None."""
        for row in self.constraints:
            if not row.satisfied(values):
                return row
        return None


@dataclass
class SdpBlock:
    """Affine symmetric block ``constant + sum_s scalar_s * terms[s]``.

    Entries are keyed by 1-based local positions ``(a, b)`` with ``a <= b``;
    ``vertices[a-1]`` is the graph vertex at local position ``a``.
    """

    vertices: tuple[int, ...]
    constant: dict[tuple[int, int], Fraction]
    terms: dict[int, dict[tuple[int, int], Fraction]]

    @property
    def dim(self):
        return len(self.vertices)


@dataclass
class Scalar:
    edge: Edge
    lower: Optional[Fraction] = None
    upper: Optional[Fraction] = None


@dataclass
class SdpModel:
    """Scalars ``X_ij`` (one per edge of the block support) entering PSD blocks.

    ``domain`` holds the two admissible values in integer mode and is None
    for the continuous relaxation.
    """

    name: str
    k: int
    scalars: list[Scalar]
    blocks: list[SdpBlock]
    objective: dict[int, Fraction]
    offset: Fraction = Fraction(0)
    domain: Optional[tuple[Fraction, Fraction]] = None

    @property
    def relaxed(self):
        return self.domain is None

    def scalar_index(self) -> dict[Edge, int]:
        return {s.edge: idx for idx, s in enumerate(self.scalars)}


@dataclass(frozen=True)
class ModelSize:
    n_binary: int = 0
    n_continuous: int = 0
    n_linear_constraints: int = 0
    n_psd_blocks: int = 0
    max_block_dim: int = 0

    def as_dict(self):
        return {
            "n_binary": self.n_binary,
            "n_continuous": self.n_continuous,
            "n_linear_constraints": self.n_linear_constraints,
            "n_psd_blocks": self.n_psd_blocks,
            "max_block_dim": self.max_block_dim,
        }


def _check_k(g, k):
    if not 2 <= k <= g.n:
        raise ValueError(f"k must satisfy 2 <= k <= n={g.n}, got {k}")


def _check_cap(rows):
    cap = row_cap()
    if rows > cap:
        raise RowCapExceeded(rows, cap)


def _edge_variables(edges, relax):
    kind = CONTINUOUS if relax else BINARY
    return [Variable(edge_var(i, j), kind) for i, j in edges]


def _edge_objective(g):
    return {edge_var(i, j): w for (i, j), w in g.weights.items() if w != 0}


def triangle_rows(triples):
    """Three rows per triple ``a < b < c``; the row named ``tri_h_i_j`` reads
    ``x_hi + x_hj - x_ij <= 1``."""
    rows = []
    for a, b, c in triples:
        for apex, p, q in ((a, b, c), (b, a, c), (c, a, b)):
            coeffs = {
                edge_var(*sorted((apex, p))): Fraction(1),
                edge_var(*sorted((apex, q))): Fraction(1),
                edge_var(p, q): Fraction(-1),
            }
            rows.append(Constraint(f"tri_{apex}_{p}_{q}", coeffs, "<=", Fraction(1)))
    return rows


def clique_rows(groups):
    rows = []
    for q in groups:
        coeffs = {edge_var(i, j): Fraction(1) for i, j in combinations(q, 2)}
        rows.append(Constraint("clq_" + "_".join(map(str, q)), coeffs, ">=", Fraction(1)))
    return rows


def build_edge_model(g: WeightedGraph, k: int, relax=False) -> LinearModel:
    """Edge formulation over the complete graph: triangle and clique rows."""
    _check_k(g, k)
    n = g.n
    _check_cap(3 * comb(n, 3) + comb(n, k + 1))
    V = range(1, n + 1)
    rows = triangle_rows(combinations(V, 3)) + clique_rows(combinations(V, k + 1))
    return LinearModel(
        name=f"edge_k{k}",
        variables=_edge_variables(all_pairs(n), relax),
        objective=_edge_objective(g),
        constraints=rows,
    )


def build_node_edge_model(g: WeightedGraph, k: int, relax=False) -> LinearModel:
    """Node-edge formulation: colour indicators per node plus one variable per edge."""
    _check_k(g, k)
    _check_cap(g.n + 3 * k * g.m)
    kind = CONTINUOUS if relax else BINARY
    variables = [Variable(f"xn_{i}_{c}", kind) for i in g.vertices for c in range(1, k + 1)]
    variables += [Variable(f"y_{i}_{j}", kind) for i, j in g.edges]
    one = Fraction(1)
    rows = [
        Constraint(f"assign_{i}", {f"xn_{i}_{c}": one for c in range(1, k + 1)}, "=", one)
        for i in g.vertices
    ]
    for i, j in g.edges:
        y = f"y_{i}_{j}"
        for c in range(1, k + 1):
            xi, xj = f"xn_{i}_{c}", f"xn_{j}_{c}"
            rows.append(Constraint(f"same_{i}_{j}_{c}", {xi: one, xj: one, y: -one}, "<=", one))
            rows.append(Constraint(f"cuti_{i}_{j}_{c}", {xi: one, xj: -one, y: one}, "<=", one))
            rows.append(Constraint(f"cutj_{i}_{j}_{c}", {xi: -one, xj: one, y: one}, "<=", one))
    return LinearModel(
        name=f"node_edge_k{k}",
        variables=variables,
        objective={f"y_{i}_{j}": w for (i, j), w in g.weights.items() if w != 0},
        constraints=rows,
    )


def build_clique_ilp(
    g: WeightedGraph, decomp: ChordalDecomposition, k: int, relax=False, dedupe=True
) -> LinearModel:
    """Clique-based ILP: variables on ``F``, triangle and clique rows inside
    each maximal clique.  ``dedupe=False`` keeps per-clique repeats."""
    _check_k(g, k)
    if decomp.base is not g and decomp.base != g:
        raise ValueError("decomposition was built from a different graph")
    if dedupe:
        triples, groups = dedupe_tuples(decomp.cliques, k)
        _check_cap(3 * len(triples) + len(groups))
    else:
        _check_cap(clique_row_bound(decomp.cliques, k))
        triples, groups = naive_tuples(decomp.cliques, k)
    rows = triangle_rows(triples) + clique_rows(groups)
    if not dedupe:
        # repeated tuples need distinct row names
        seen = {}
        for row in rows:
            count = seen.get(row.name, 0)
            seen[row.name] = count + 1
            if count:
                row.name = f"{row.name}_r{count}"
    return LinearModel(
        name=f"clique_ilp_k{k}",
        variables=_edge_variables(decomp.F, relax),
        objective=_edge_objective(g),
        constraints=rows,
    )


def _sdp_objective(g, k, index):
    """Objective ``sum w (k-1)/k X_ij`` plus constant ``sum w / k``."""
    obj = {}
    offset = Fraction(0)
    for e, w in g.weights.items():
        if w == 0:
            continue
        obj[index[e]] = w * (k - 1) / k
        offset += w / k
    return obj, offset


def _sdp_block(vertices, index):
    pos = {v: a for a, v in enumerate(vertices, start=1)}
    constant = {(a, a): Fraction(1) for a in pos.values()}
    terms = {}
    for u, v in combinations(vertices, 2):
        terms[index[(u, v)]] = {(pos[u], pos[v]): Fraction(1)}
    return SdpBlock(tuple(vertices), constant, terms)


def _sdp_model(name, g, k, support, blocks, relax):
    lower = Fraction(-1, k - 1)
    scalars = [Scalar(e, lower if relax else None) for e in support]
    index = {e: i for i, e in enumerate(support)}
    objective, offset = _sdp_objective(g, k, index)
    return SdpModel(
        name=name,
        k=k,
        scalars=scalars,
        blocks=[_sdp_block(c, index) for c in blocks],
        objective=objective,
        offset=offset,
        domain=None if relax else (lower, Fraction(1)),
    )


def build_isdp(g: WeightedGraph, k: int, relax=False) -> SdpModel:
    """Single ``n x n`` block with unit diagonal over all vertex pairs.

    The upper bound ``X_ij <= 1`` is left out of the relaxation since unit
    diagonal plus PSD implies it.
    """
    _check_k(g, k)
    return _sdp_model(f"isdp_k{k}", g, k, all_pairs(g.n), [tuple(g.vertices)], relax)


def build_clique_isdp(g: WeightedGraph, decomp: ChordalDecomposition, k: int, relax=False) -> SdpModel:
    """One block per maximal clique; shared edges reuse the same scalar."""
    _check_k(g, k)
    return _sdp_model(f"clique_isdp_k{k}", g, k, list(decomp.F), list(decomp.cliques), relax)


def model_size(model) -> ModelSize:
    if isinstance(model, LinearModel):
        n_bin = sum(v.kind == BINARY for v in model.variables)
        return ModelSize(
            n_binary=n_bin,
            n_continuous=len(model.variables) - n_bin,
            n_linear_constraints=len(model.constraints),
        )
    count = len(model.scalars)
    bounds = sum((s.lower is not None) + (s.upper is not None) for s in model.scalars)
    return ModelSize(
        n_binary=0 if model.relaxed else count,
        n_continuous=count if model.relaxed else 0,
        n_linear_constraints=bounds,
        n_psd_blocks=len(model.blocks),
        max_block_dim=max((b.dim for b in model.blocks), default=0),
    )


MODEL_KINDS = ("edge", "node-edge", "clique-ilp", "isdp", "clique-isdp")
