import random
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _util import random_connected_graph
from mkp.chordal import clique_row_bound, greedy_fill_in
from mkp.exceptions import ModelFormatError, RowCapExceeded
from mkp.exhaustive import solve_by_enumeration
from mkp.graph import WeightedGraph, gen_band, gen_spinglass2g
from mkp.lpfile import emit_lp, parse_lp
from mkp.models import (
    BINARY,
    Constraint,
    LinearModel,
    SdpBlock,
    SdpModel,
    Scalar,
    Variable,
    build_clique_ilp,
    build_clique_isdp,
    build_edge_model,
    build_isdp,
    build_node_edge_model,
    model_size,
)
from mkp.sdpa import emit_sdpa, parse_sdpa
from mkp.solver import block_matrix, brute_force_solve, is_psd

K3 = WeightedGraph.from_edges(3, [(1, 2), (1, 3), (2, 3)])
C4 = WeightedGraph.from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)])


def test_edge_model_counts():
    m = build_edge_model(C4, 3)
    s = model_size(m)
    assert (s.n_binary, s.n_linear_constraints) == (6, 13)
    assert sum(r.name.startswith("tri_") for r in m.constraints) == 12
    s = model_size(build_edge_model(K3, 3))
    assert (s.n_binary, s.n_linear_constraints) == (3, 3)


def test_edge_model_k_range():
    with pytest.raises(ValueError):
        build_edge_model(K3, 4)
    with pytest.raises(ValueError):
        build_edge_model(K3, 1)


def test_row_cap(monkeypatch):
    monkeypatch.setenv("MKP_ROW_CAP", "10")
    with pytest.raises(RowCapExceeded, match="13"):
        build_edge_model(C4, 3)
    monkeypatch.setenv("MKP_ROW_CAP", "13")
    build_edge_model(C4, 3)


def test_node_edge_counts():
    m = build_node_edge_model(C4, 3)
    assert model_size(m).n_binary == 16
    eq = [r for r in m.constraints if r.sense == "="]
    assert len(eq) == 4 and len(m.constraints) - len(eq) == 36


def test_node_edge_k3_triangle_zero():
    value, _ = solve_by_enumeration(build_node_edge_model(K3, 3))
    assert value == 0


def test_clique_ilp_chordal_uses_E():
    g = gen_band(50, 3, seed=0)
    d = greedy_fill_in(g)
    m = build_clique_ilp(g, d, 3)
    s = model_size(m)
    assert s.n_binary == g.m == 190
    assert s.n_linear_constraints == 840 + 185
    assert model_size(build_edge_model(g, 3)).n_binary == 1225


def test_clique_ilp_naive_matches_bound():
    g = gen_band(20, 3, seed=1)
    d = greedy_fill_in(g)
    naive = build_clique_ilp(g, d, 3, dedupe=False)
    assert len(naive.constraints) == clique_row_bound(d.cliques, 3)
    assert len({r.name for r in naive.constraints}) == len(naive.constraints)
    assert len(build_clique_ilp(g, d, 3).constraints) < len(naive.constraints)


def test_clique_ilp_fewer_variables_when_sparse():
    d = greedy_fill_in(C4)
    assert model_size(build_clique_ilp(C4, d, 2)).n_binary == 5 < 6
    k4 = WeightedGraph.from_edges(4, combinations(range(1, 5), 2))
    dk = greedy_fill_in(k4)
    assert model_size(build_clique_ilp(k4, dk, 2)).n_binary == 6


def test_clique_ilp_rejects_foreign_decomposition():
    with pytest.raises(ValueError):
        build_clique_ilp(K3, greedy_fill_in(C4), 2)


def test_isdp_objective_coefficients():
    g = WeightedGraph(3, {(1, 2): Fraction(6)})
    m = build_isdp(g, 3)
    idx = m.scalar_index()[(1, 2)]
    assert m.objective == {idx: 4}
    assert m.offset == 2
    assert m.domain == (Fraction(-1, 2), 1)
    r = build_isdp(g, 3, relax=True)
    assert all(s.lower == Fraction(-1, 2) and s.upper is None for s in r.scalars)


def test_isdp_all_together_is_psd():
    m = build_isdp(C4, 3)
    X = block_matrix(m.blocks[0], [1.0] * len(m.scalars))
    assert np.allclose(X, np.ones((4, 4))) and is_psd(X)


def test_clique_isdp_band():
    g = gen_band(50, 3, seed=0)
    d = greedy_fill_in(g)
    m = build_clique_isdp(g, d, 3, relax=True)
    s = model_size(m)
    assert s.n_psd_blocks == 46 and s.max_block_dim == 5
    assert len(m.scalars) == 190
    assert all(b.dim == 5 for b in m.blocks)


def test_clique_isdp_complete_equals_isdp():
    k4 = WeightedGraph(4, {(1, 2): 1, (1, 3): -1, (1, 4): 2, (2, 3): 1, (2, 4): 1, (3, 4): -2})
    a = build_isdp(k4, 3, relax=True)
    b = build_clique_isdp(k4, greedy_fill_in(k4), 3, relax=True)
    assert emit_sdpa(a).split("\n", 1)[1] == emit_sdpa(b).split("\n", 1)[1]


def test_shared_scalars_across_blocks():
    g = gen_band(8, 2, seed=0)
    m = build_clique_isdp(g, greedy_fill_in(g), 2)
    idx = m.scalar_index()[(3, 4)]
    holders = [b for b in m.blocks if idx in b.terms]
    assert len(holders) >= 2


@pytest.mark.parametrize("seed", range(25))
def test_objective_matches_evaluation(seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, rng.randint(3, 7), p=0.4)
    k = rng.randint(2, min(4, g.n))
    res = brute_force_solve(g, k)
    from mkp.assignment import partition_to_edges
    from mkp.graph import all_pairs
    from mkp.models import edge_var

    x = partition_to_edges(res.partition, all_pairs(g.n))
    m = build_edge_model(g, k)
    point = {edge_var(*e): b for e, b in x.items()}
    assert m.violated(point) is None
    assert m.evaluate(point) == res.optimum


def test_zero_weights_dropped_from_objective():
    g = WeightedGraph(3, {(1, 2): 0, (2, 3): 1})
    assert build_edge_model(g, 2).objective == {"x_2_3": 1}


# --- LP format --------------------------------------------------------------


def test_lp_smallest_model():
    m = LinearModel("one", [Variable("x1")], {"x1": Fraction(1)}, [])
    text = emit_lp(m)
    assert [ln for ln in text.splitlines() if not ln.startswith("\\")] == [
        "Minimize", " obj: +1 x1", "Subject To", "Bounds", "Binaries", " x1", "End",
    ]
    assert parse_lp(text) == m


def test_lp_edge_model_k4_rows():
    k4 = WeightedGraph.from_edges(4, combinations(range(1, 5), 2))
    text = emit_lp(build_edge_model(k4, 3))
    body = text.split("Subject To\n")[1].split("Bounds")[0]
    assert len(body.strip().splitlines()) == 13


def _lp_models():
    rng = random.Random(3)
    out = []
    for _ in range(6):
        g = random_connected_graph(rng, rng.randint(3, 7), p=0.4)
        d = greedy_fill_in(g)
        for relax in (False, True):
            out += [build_edge_model(g, 2, relax), build_node_edge_model(g, 3, relax), build_clique_ilp(g, d, 2, relax)]
    g = gen_spinglass2g(3, 3, seed=4)
    out.append(build_clique_ilp(g, greedy_fill_in(g), 3))
    return out


@pytest.mark.parametrize("model", _lp_models(), ids=lambda m: m.name)
def test_lp_round_trip(model):
    text = emit_lp(model)
    back = parse_lp(text)
    assert back == model
    assert emit_lp(back) == text


def test_lp_reader_accepts_hand_written():
    text = """\\ a comment
Minimize
 obj: 2 a - 3.5 b
   + c
Subject To
 r1: a + b >= 1
 r2: -a + 2 c <= 4
Bounds
 0 <= c <= 10
 b free
Binaries
 a
End
"""
    m = parse_lp(text)
    assert m.objective == {"a": 2, "b": Fraction(-7, 2), "c": 1}
    assert [v.name for v in m.variables] == ["c", "b", "a"]
    assert m.variables[1].lower is None and m.variables[1].upper is None
    assert m.constraints[1].rhs == 4


@pytest.mark.parametrize(
    "text",
    [
        "Minimize\n obj: x\nSubject To\n r: x <> 1\nEnd\n",
        "Minimize\n obj: x\nSubject To\n r: x <= 1\n",
        "Maximize\n obj: x\nEnd\n",
    ],
)
def test_lp_reader_errors(text):
    with pytest.raises(ModelFormatError):
        parse_lp(text)


# --- SDPA format ------------------------------------------------------------


def test_sdpa_single_block():
    block = SdpBlock((1, 2), {(1, 1): Fraction(1), (2, 2): Fraction(1)}, {0: {(1, 2): Fraction(1)}})
    m = SdpModel("tiny", 2, [Scalar((1, 2))], [block], {0: Fraction(1)})
    text = emit_sdpa(m)
    data = [ln for ln in text.splitlines() if not ln.startswith("*")]
    assert data[:4] == ["1", "1", "2", "1"]
    assert len(data) - 4 == 3
    assert parse_sdpa(text) == m


def test_sdpa_band_block_count():
    g = gen_band(50, 3, seed=0)
    text = emit_sdpa(build_clique_isdp(g, greedy_fill_in(g), 3, relax=True))
    data = [ln for ln in text.splitlines() if not ln.startswith("*")]
    assert data[0] == "190" and data[1] == "47"
    struct = data[2].split()
    assert struct[:46] == ["5"] * 46 and struct[46] == "-190"


def test_sdpa_refuses_integer_mode():
    with pytest.raises(ValueError, match="relax"):
        emit_sdpa(build_isdp(K3, 2))


@pytest.mark.parametrize("seed", range(8))
def test_sdpa_round_trip(seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, rng.randint(3, 8), p=0.3)
    k = rng.randint(2, 3)
    for m in (build_isdp(g, k, relax=True), build_clique_isdp(g, greedy_fill_in(g), k, relax=True)):
        text = emit_sdpa(m)
        back = parse_sdpa(text)
        assert (back.name, back.k, back.scalars, back.blocks) == (m.name, m.k, m.scalars, m.blocks)
        # thirds have no finite decimal form; the cost vector is exact to double precision
        assert {s: float(c) for s, c in back.objective.items()} == {s: float(c) for s, c in m.objective.items()}
        assert float(back.offset) == float(m.offset)
        assert emit_sdpa(back) == text
        for b0, b1 in zip(m.blocks, back.blocks):
            vals = [rng.random() for _ in m.scalars]
            assert np.array_equal(block_matrix(b0, vals), block_matrix(b1, vals))


def test_sdpa_reader_errors():
    with pytest.raises(ModelFormatError):
        parse_sdpa("1\n1\n2\n1\n0 1 1 x 1\n")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 3))
def test_emitters_deterministic(seed, k):
    g = random_connected_graph(random.Random(seed), 6, p=0.3)
    d = greedy_fill_in(g)
    assert emit_lp(build_clique_ilp(g, d, k)) == emit_lp(build_clique_ilp(g, greedy_fill_in(g), k))
    assert emit_sdpa(build_clique_isdp(g, d, k, True)) == emit_sdpa(build_clique_isdp(g, d, k, True))
