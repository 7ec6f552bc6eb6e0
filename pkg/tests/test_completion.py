import random
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest

from _util import random_connected_graph
from mkp.assignment import EdgeAssignment, Partition, partition_to_edges
from mkp.chordal import clique_containing, greedy_fill_in, is_chordal
from mkp.completion import (
    block_from_partition,
    complete_solution,
    extend_one,
    gram_certificate,
    grone_sequence,
    grone_sequence_from_edges,
    map_x_to_y,
    map_y_to_x,
    psd_check_3x3_violation,
    unit_vectors,
)
from mkp.exceptions import ContractViolation, InfeasibleAssignment
from mkp.graph import WeightedGraph, adjacency, all_pairs
from mkp.solver import check_feasible_edge_model

PATH = WeightedGraph.from_edges(3, [(1, 2), (2, 3)])


def test_grone_complete_graph_empty():
    k4 = WeightedGraph.from_edges(4, combinations(range(1, 5), 2))
    assert grone_sequence(greedy_fill_in(k4)).steps == ()


def test_grone_path():
    assert grone_sequence(greedy_fill_in(PATH)).steps == ((1, 3),)


def _random_chordal(rng, n):
    g = random_connected_graph(rng, n, p=rng.choice((0.1, 0.3, 0.5)))
    return greedy_fill_in(g)


@pytest.mark.parametrize("seed", range(100))
def test_grone_prefixes_chordal(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    d = _random_chordal(rng, n)
    seq = grone_sequence(d)
    assert len(seq.steps) == len(all_pairs(n)) - len(d.F)
    edges = set(d.F)
    for e in seq.steps:
        # the new edge sits in exactly one maximal clique of the enlarged graph
        adj = adjacency(n, edges | {e})
        C = clique_containing(adj, *e)
        assert all(b in adj[a] for a, b in combinations(C, 2))
        others = [v for v in range(1, n + 1) if v not in C]
        assert not any(all(v in adj[u] for u in C) for v in others)
        edges.add(e)
        assert is_chordal(n, edges)
    assert edges == set(all_pairs(n))


def test_grone_rejects_nonchordal_start():
    with pytest.raises(ValueError):
        grone_sequence_from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)])


@pytest.mark.parametrize("x12, x23, want", [(1, 0, 0), (0, 0, 1), (1, 1, 1), (0, 1, 0)])
def test_extend_one_path(x12, x23, want):
    adj = adjacency(3, [(1, 2), (2, 3)])
    assert extend_one({(1, 2): x12, (2, 3): x23}, adj, (1, 3), 3) == want


def test_extend_one_case1_feasible():
    x = EdgeAssignment({(1, 2): 0, (2, 3): 0, (1, 3): 1})
    assert check_feasible_edge_model(x, 3, 3)


def test_extend_one_flags_mixed_cases():
    # 1 and 4 are both adjacent to 2 and 3; x puts 2 with 1 only and 3 with both
    adj = adjacency(4, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
    x = {(1, 2): 1, (1, 3): 1, (2, 3): 0, (2, 4): 0, (3, 4): 1}
    with pytest.raises(ContractViolation):
        extend_one(x, adj, (1, 4), 3)


def test_complete_identity_on_complete_graph():
    k4 = WeightedGraph.from_edges(4, combinations(range(1, 5), 2))
    d = greedy_fill_in(k4)
    x = partition_to_edges(Partition(2, (1, 2, 1, 2)), d.F)
    assert complete_solution(x, d, 2) == x


@pytest.mark.parametrize("seed", range(40))
def test_complete_partition_image(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 8)
    g = random_connected_graph(rng, n, p=0.25)
    d = greedy_fill_in(g)
    k = rng.randint(2, 4)
    p = Partition(k, tuple(rng.randint(1, k) for _ in range(n)))
    x_F = partition_to_edges(p, d.F)
    full = complete_solution(x_F, d, k)
    assert check_feasible_edge_model(full, n, k)
    assert full.restrict(d.F) == x_F


def test_complete_merges_unseparated_pair():
    d = greedy_fill_in(PATH)
    x_F = partition_to_edges(Partition(3, (1, 2, 3)), d.F)
    assert complete_solution(x_F, d, 3)[(1, 3)] == 1


def test_complete_equals_partition_when_blocks_span_cliques():
    # every vertex pair of the chordal graph is an edge, nothing to invent
    g = WeightedGraph.from_edges(5, [(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (3, 5)])
    d = greedy_fill_in(g)
    p = Partition(2, (1, 1, 1, 2, 2))
    assert complete_solution(partition_to_edges(p, d.F), d, 2) == partition_to_edges(p, all_pairs(5))


def test_complete_reports_violated_row():
    d = greedy_fill_in(WeightedGraph.from_edges(3, [(1, 2), (2, 3), (1, 3)]))
    with pytest.raises(InfeasibleAssignment) as exc:
        complete_solution({(1, 2): 1, (1, 3): 1, (2, 3): 0}, d, 3)
    assert exc.value.row.startswith("tri_")


def test_map_examples():
    assert map_y_to_x(1, 3) == 1
    assert map_y_to_x(0, 3) == Fraction(-1, 2)
    for k in range(2, 11):
        for y in (0, 1):
            assert map_x_to_y(map_y_to_x(y, k), k) == y
    with pytest.raises(ValueError):
        map_x_to_y(0.0, 3)


def test_unit_vectors_small():
    U = unit_vectors(2)
    assert U.shape == (2, 1) and np.allclose(sorted(U[:, 0]), [-1, 1], atol=1e-12)
    U = unit_vectors(3)
    G = U @ U.T
    assert np.allclose(G[~np.eye(3, dtype=bool)], -0.5, atol=1e-12)


@pytest.mark.parametrize("k", range(2, 11))
def test_unit_vector_gram(k):
    U = unit_vectors(k)
    assert U.shape == (k, k - 1)
    G = U @ U.T
    want = k / (k - 1) * np.eye(k) - np.ones((k, k)) / (k - 1)
    assert np.max(np.abs(G - want)) <= 1e-12


def test_gram_examples():
    same = gram_certificate(Partition(3, (2, 2, 2)), (1, 2, 3), 3)
    assert np.allclose(same.T @ same, np.ones((3, 3)), atol=1e-9)
    B = gram_certificate(Partition(3, (1, 2, 3)), (1, 2, 3), 3)
    X = B.T @ B
    assert np.allclose(np.diag(X), 1) and np.allclose(X[0, 1], -0.5)
    with pytest.raises(ValueError):
        gram_certificate(Partition(4, (1, 2, 3, 4)), (1, 2), 3)


def test_gram_random():
    rng = random.Random(0)
    for _ in range(500):
        k = rng.randint(2, 4)
        size = rng.randint(1, 6)
        p = Partition(k, tuple(rng.randint(1, k) for _ in range(size)))
        clique = tuple(range(1, size + 1))
        B = gram_certificate(p, clique, k)
        assert np.max(np.abs(B.T @ B - block_from_partition(p, clique, k))) <= 1e-9


def test_determinant_examples():
    assert psd_check_3x3_violation(1, 1, -1) == -4
    assert psd_check_3x3_violation(1, 1, 1) == 0
    h = Fraction(-1, 2)
    assert psd_check_3x3_violation(h, h, h) == 0


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_determinant_sign_pattern(k):
    for y in product((0, 1), repeat=3):
        det = psd_check_3x3_violation(*(map_y_to_x(b, k) for b in y))
        # with k = 2 three mutually separated vertices are impossible as well
        bad = sorted(y) == [0, 1, 1] or (k == 2 and y == (0, 0, 0))
        assert (det < 0) == bad
        if bad:
            assert det == -Fraction(k, k - 1) ** 2
