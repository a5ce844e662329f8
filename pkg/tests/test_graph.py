import numpy as np
import pytest

from traceinfer.errors import ParameterError, ParseError, ValidationError
from traceinfer.graph import (FAMILIES, Graph, GraphSpec, clique, clique_minus_edge, cycle,
                              edge_set_diff, generate, read_edge_list, star, tree_from_degrees,
                              write_edge_list)


def test_edges_normalized_and_sorted():
    g = Graph(4, [(3, 1), (0, 2), (1, 0)])
    assert g.edges.tolist() == [[0, 1], [0, 2], [1, 3]]
    assert g.has_edge(3, 1) and not g.has_edge(2, 3)


@pytest.mark.parametrize("edges", [[(1, 1)], [(0, 1), (1, 0)], [(0, 5)], [(-1, 0)]])
def test_bad_edges_rejected(edges):
    with pytest.raises((ParameterError, ValidationError)):
        Graph(4, edges)


def test_csr_neighbors_match_edges(small_graphs):
    for g in small_graphs:
        for v in range(g.n):
            expect = sorted({b for a, b in g.edge_set() if a == v} | {a for a, b in g.edge_set() if b == v})
            assert sorted(g.neighbors(v).tolist()) == expect
        assert g.degrees().sum() == 2 * g.m


def test_clique_minus_edge():
    g = clique_minus_edge(6)
    assert g.m == 14 and not g.has_edge(0, 1)
    assert clique(6).m == 15


def test_star_and_cycle():
    assert star(5).degrees().tolist() == [5, 1, 1, 1, 1, 1]
    assert set(cycle(4).degrees().tolist()) == {2}


@pytest.mark.parametrize("family", [f for f in FAMILIES if f != "custom_edge_list"])
def test_generate_deterministic(family):
    spec = GraphSpec(family, 40, m=2, p=0.1, degree=3, seed=7)
    a, b = generate(spec), generate(spec)
    assert a == b and a.graph_id == b.graph_id


def test_seed_changes_random_families():
    a = generate(GraphSpec("gnp", 50, p=0.1, seed=1))
    b = generate(GraphSpec("gnp", 50, p=0.1, seed=2))
    assert a != b


def test_trees_are_trees():
    for s in range(10):
        assert generate(GraphSpec("uniform_random_tree", 60, seed=s)).is_tree()
        g = generate(GraphSpec("power_law_tree", 200, exponent=3.0, seed=s))
        assert g.is_tree()


def test_tree_from_degrees_realizes_sequence(rng):
    deg = np.array([3, 1, 1, 3, 1, 3, 1, 1])
    assert deg.sum() == 2 * (len(deg) - 1)
    for _ in range(20):
        g = Graph(len(deg), tree_from_degrees(deg, rng))
        assert g.is_tree() and g.degrees().tolist() == deg.tolist()


def test_barabasi_albert_shape():
    g = generate(GraphSpec("barabasi_albert", 300, m=3, seed=0))
    assert g.is_connected()
    assert g.m == 3 + 3 * (300 - 3)
    assert g.max_degree() > 20  # heavy tail


def test_random_regular():
    g = generate(GraphSpec("random_regular", 16, degree=3, seed=5))
    assert set(g.degrees().tolist()) == {3}


def test_gnp_density():
    g = generate(GraphSpec("gnp", 300, p=0.2, seed=0))
    expect = 0.2 * 300 * 299 / 2
    assert abs(g.m - expect) < 4 * np.sqrt(expect)


@pytest.mark.parametrize("spec", [
    GraphSpec("nope", 5), GraphSpec("gnp", 5, p=1.5), GraphSpec("barabasi_albert", 3, m=3),
    GraphSpec("random_regular", 5, degree=3), GraphSpec("path", 0),
])
def test_spec_validation(spec):
    with pytest.raises(ParameterError):
        generate(spec)


def test_spec_dict_roundtrip():
    spec = GraphSpec("custom_edge_list", 3, edges=((0, 1), (1, 2)))
    assert GraphSpec.from_dict(spec.to_dict()) == spec
    assert generate(spec).m == 2


def test_edge_set_diff():
    truth = Graph(4, [(0, 1), (1, 2), (2, 3)])
    pred = Graph(4, [(0, 1), (0, 3)])
    assert edge_set_diff(pred, truth) == (1, 1, 2)
    with pytest.raises(ParameterError):
        edge_set_diff(Graph(5), truth)


def test_edge_list_roundtrip(tmp_path, small_graphs):
    for g in small_graphs:
        write_edge_list(g, tmp_path / "g.txt")
        assert read_edge_list(tmp_path / "g.txt") == g


@pytest.mark.parametrize("body,line", [
    ("n 3\n0 0\n", 2), ("n 3\n0 1\n0 1\n", 3), ("n 3\n2 1\n", 2), ("n 3\n0 3\n", 2),
    ("n 3\n0 x\n", 2), ("x 3\n", 1), ("", 1),
])
def test_edge_list_errors_report_line(tmp_path, body, line):
    f = tmp_path / "bad.txt"
    f.write_text(body)
    with pytest.raises((ParseError, ValidationError)) as exc:
        read_edge_list(f)
    assert f"line {line}" in str(exc.value)


def test_golden_edge_list(tmp_path):
    from conftest import DATA
    g = generate(GraphSpec("uniform_random_tree", 12, seed=3))
    write_edge_list(g, tmp_path / "g.txt")
    assert (tmp_path / "g.txt").read_text() == (DATA / "tree12.edges").read_text()
