from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mkp.exceptions import GeneratorError, GraphFormatError
from mkp.graph import (
    WeightedGraph,
    emit_graph,
    gen_band,
    gen_rndgraph,
    gen_spinglass2g,
    gen_spinglass2pm,
    is_connected,
    parse_graph,
    read_graph,
    write_graph,
)


def test_parse_triangle():
    g = parse_graph("3 3\n1 2 1\n2 3 1\n1 3 1")
    assert g.n == 3 and g.edges == ((1, 2), (1, 3), (2, 3))
    assert all(w == 1 for w in g.weights.values())


def test_parse_negative_decimal():
    g = parse_graph("2 1\n1 2 -4.5")
    assert g.weights == {(1, 2): Fraction(-9, 2)}


@pytest.mark.parametrize(
    "text, line",
    [
        ("3 2\n1 2 1\n1 2 1", 3),
        ("3 1\n2 2 1", 2),
        ("3 1\n1 4 1", 2),
        ("3 2\n1 2 1", None),
        ("x y\n", 1),
        ("3 1\n1 2", 2),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(GraphFormatError) as exc:
        parse_graph(text)
    if line is not None:
        assert exc.value.line == line
        assert f"line {line}" in str(exc.value)


def test_duplicate_reported_on_line_3():
    with pytest.raises(GraphFormatError, match="duplicate"):
        parse_graph("3 2\n1 2 1\n1 2 1")


def test_comments_and_blank_lines():
    g = parse_graph("# header\n\n2 1\n# edge follows\n2 1 3\n")
    assert g.weights == {(1, 2): 3}


def test_emit_canonical():
    g = parse_graph("3 3\n1 2 1\n2 3 1\n1 3 1")
    assert emit_graph(g) == "3 3\n1 2 1\n1 3 1\n2 3 1"
    assert emit_graph(WeightedGraph(2, {})) == "2 0"


def test_file_round_trip(tmp_path):
    g = gen_band(9, 2, seed=3)
    write_graph(g, tmp_path / "g.wg")
    assert read_graph(tmp_path / "g.wg") == g


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["band", "sg", "pm", "rnd"]), st.integers(0, 2**64 - 1))
def test_generated_graphs_round_trip(family, seed):
    g = {
        "band": lambda: gen_band(12, 3, seed),
        "sg": lambda: gen_spinglass2g(3, 4, seed),
        "pm": lambda: gen_spinglass2pm(3, 3, seed),
        "rnd": lambda: gen_rndgraph(12, 0.4, seed),
    }[family]()
    text = emit_graph(g)
    assert parse_graph(text) == g
    assert emit_graph(parse_graph(text)) == text


def test_is_connected():
    assert is_connected(WeightedGraph.from_edges(3, [(1, 2), (2, 3)]))
    assert not is_connected(WeightedGraph.from_edges(4, [(1, 2), (3, 4)]))


def test_band_counts():
    assert gen_band(50, 3, seed=7).m == 190 == sum(50 - d for d in range(1, 5))
    assert gen_band(5, 3, seed=0).is_complete()


def test_band_sign_rate():
    neg = total = 0
    for seed in range(1000):
        w = gen_band(50, 3, seed).weights.values()
        neg += sum(x == -1 for x in w)
        total += len(w)
        assert set(w) <= {-1, 1}
    assert abs(neg / total - 0.5) <= 0.05


def test_spinglass_grid():
    g = gen_spinglass2g(3, 3, seed=11)
    assert g.n == 9 and g.m == 18
    assert all(len(nb) == 4 for nb in g.adjacency().values())
    assert all(w.denominator == 1 and w != 0 for w in g.weights.values())
    assert gen_spinglass2g(3, 3, seed=11) == g


def test_spinglass_2x2_collapses():
    g = gen_spinglass2g(2, 2, seed=0)
    assert g.n == 4 and g.m == 4


def test_spinglass_pm():
    g = gen_spinglass2pm(4, 4, seed=5)
    assert g.m == 32 and set(g.weights.values()) <= {-1, 1}
    neg = total = 0
    for seed in range(1000):
        w = list(gen_spinglass2pm(3, 3, seed).weights.values())
        neg += sum(x == -1 for x in w)
        total += len(w)
    assert abs(neg / total - 0.5) <= 0.05
    assert gen_spinglass2pm(4, 4, seed=5) == g


def test_rndgraph():
    g = gen_rndgraph(10, 1.0, seed=1)
    assert g.is_complete() and g.m == 45
    counts = [gen_rndgraph(100, 0.1, seed).m for seed in range(100)]
    assert abs(sum(counts) / len(counts) - 495) <= 50
    assert all(w == 1 for w in gen_rndgraph(30, 0.2, seed=2).weights.values())


def test_rndgraph_gives_up():
    with pytest.raises(GeneratorError):
        gen_rndgraph(40, 0.001, seed=0)


@pytest.mark.parametrize("seed", range(5))
def test_generators_connected_and_deterministic(seed):
    for make in (
        lambda: gen_band(20, 2, seed),
        lambda: gen_spinglass2g(4, 5, seed),
        lambda: gen_spinglass2pm(5, 3, seed),
        lambda: gen_rndgraph(25, 0.15, seed),
    ):
        g = make()
        assert is_connected(g)
        assert make() == g


def test_seed_range():
    with pytest.raises(ValueError):
        gen_band(5, 2, seed=2**64)
