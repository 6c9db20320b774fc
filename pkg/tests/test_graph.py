from fractions import Fraction

import pytest

from artifact.graph import (
    Graph,
    GraphError,
    Separation,
    anti_edge_count,
    average_degree,
    complete_graph,
    cycle_graph,
    disjoint_union,
    edge_count,
    empty_graph,
    glue,
    is_forest,
    path_graph,
    verify_separation,
)


def test_edge_counts():
    assert edge_count(empty_graph(5)) == 0
    assert edge_count(complete_graph(4)) == 6
    assert edge_count(path_graph(4)) == 3


def test_average_degree():
    assert average_degree(complete_graph(4)) == 3
    assert average_degree(Graph(4, [(0, 1), (0, 2), (0, 3)])) == Fraction(3, 2)
    assert average_degree(complete_graph(7)) == 6
    with pytest.raises(GraphError):
        average_degree(empty_graph(0))


def test_anti_edge_count():
    assert anti_edge_count(complete_graph(4)) == 0
    assert anti_edge_count(empty_graph(3)) == 3
    assert anti_edge_count(cycle_graph(5)) == 5
    assert anti_edge_count(cycle_graph(5), [0, 1, 2]) == 1


def test_verify_separation():
    k4 = complete_graph(4)
    assert verify_separation(k4, Separation.of(range(4), range(4)))
    p3 = path_graph(3)
    assert verify_separation(p3, Separation.of([0, 1], [1, 2]))
    assert not verify_separation(p3, Separation.of([0], [2]))


def test_verify_separation_crossing_edge():
    p3 = path_graph(3)
    assert not verify_separation(p3, Separation.of([0, 1], [0, 2]))


def test_glue():
    p = glue(complete_graph(2), complete_graph(2), {1: 0})
    assert p.n == 3 and edge_count(p) == 2
    g = glue(complete_graph(4), complete_graph(4), {2: 0, 3: 1})
    assert g.n == 6 and edge_count(g) == 11
    d = glue(complete_graph(3), complete_graph(3), {})
    assert d == disjoint_union(complete_graph(3), complete_graph(3))
    assert d.n == 6 and edge_count(d) == 6


def test_glue_rejects_non_injective_pairing():
    with pytest.raises(GraphError):
        glue(complete_graph(3), complete_graph(3), [(0, 1), (1, 1)])


def test_text_round_trip():
    g = cycle_graph(5)
    assert Graph.from_text(g.to_text()) == g
    assert Graph.from_dict(g.to_dict()) == g


@pytest.mark.parametrize("text", [
    "", "3\n", "3 1\n0 0\n", "3 2\n0 1\n", "2 1\n0 5\n", "3 1\na b\n", "3 2\n0 1\n1 0\n", "3 1\n0 1 2\n",
])
def test_malformed_text(text):
    with pytest.raises(GraphError):
        Graph.from_text(text)


def test_comment_lines_are_skipped():
    assert Graph.from_text("# header\n2 1\n0 1\n") == complete_graph(2)


def test_is_forest():
    assert is_forest(path_graph(6))
    assert is_forest(empty_graph(4))
    assert not is_forest(cycle_graph(3))
