import pytest

from artifact.connectivity import (
    find_highly_connected_subgraph,
    find_small_separation,
    is_k_plus_1_connected,
    local_connectivity,
)
from artifact.extremal import gen_mader
from artifact.graph import Graph, GraphError, complete_graph, cycle_graph, disjoint_union, path_graph, verify_separation
from artifact.oracle import brute_highly_connected, brute_is_k_plus_1_connected
from conftest import petersen, two_k4


def test_local_connectivity_small():
    assert local_connectivity(complete_graph(4), 0, 3) == 3
    assert local_connectivity(path_graph(3), 0, 2) == 1
    with pytest.raises(GraphError):
        local_connectivity(path_graph(3), 1, 1)


def test_petersen_local_connectivity():
    g = petersen()
    assert all(local_connectivity(g, u, v) == 3 for u in range(10) for v in range(u + 1, 10))


def test_no_separation_in_complete_graph():
    assert find_small_separation(complete_graph(6), 2) is None


def test_glue_set_is_found():
    g = two_k4()
    sep = find_small_separation(g, 2)
    assert sep is not None and sep.separator == frozenset({2, 3})
    assert verify_separation(g, sep)


def test_disconnected_gives_empty_separator():
    g = disjoint_union(complete_graph(3), complete_graph(3))
    sep = find_small_separation(g, 1)
    assert sep.separator == frozenset()
    assert {sep.side_a, sep.side_b} == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}


def test_is_k_plus_1_connected():
    assert is_k_plus_1_connected(cycle_graph(5), 1)
    assert not is_k_plus_1_connected(path_graph(5), 1)
    k5 = complete_graph(5)
    missing = Graph(5, [e for e in k5.edges if e != (0, 1)])
    assert not is_k_plus_1_connected(missing, 3)
    assert brute_is_k_plus_1_connected(missing, 2)


def test_highly_connected_subgraph():
    assert find_highly_connected_subgraph(complete_graph(5), 2) == frozenset(range(5))
    assert find_highly_connected_subgraph(path_graph(7), 1) is None
    mader = gen_mader(2, 3)
    assert find_highly_connected_subgraph(mader, 2) is None
    assert brute_highly_connected(mader, 2, 5) is None


def test_custom_strategy_is_checked():
    def bogus(g, part, k):
        from artifact.graph import Separation
        return Separation.of([0], [1])

    with pytest.raises(AssertionError):
        find_small_separation(path_graph(3), 1, strategy=bogus)
