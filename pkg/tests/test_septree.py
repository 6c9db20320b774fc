import json
from fractions import Fraction
from itertools import combinations

import pytest

from artifact.abstract import BoundConstants
from artifact.extremal import gen_G
from artifact.graph import Graph, GraphError, complete_graph, cycle_graph, path_graph
from artifact.septree import (
    Found,
    SeparatorTree,
    assign_valuation,
    associated_framework,
    atomic_defect,
    build,
    check_alpha_inequality,
    check_baby_case,
    classify_anti_edge,
    count_free_anti_edges,
    framework_edge_number,
    framework_value,
    technical_data,
    verify_tree,
)
from artifact.tree import TreeError
from conftest import two_k4

# three separators of the nested-descent picture, k = 5
ROOT_ATOM = set(range(7))
MID_ATOM = {1, 2, 3, 4, 7, 8, 9, 10}
LOW_A = {0, 7, 8, 9, 11, 2, 12}
LOW_B = {0, 7, 8, 9, 11, 3, 13}
MISSING = {(0, 1), (0, 4), (1, 2), (2, 3)}


def descent_instance():
    es = set()
    for part in (ROOT_ATOM, MID_ATOM, LOW_A, LOW_B):
        es |= set(combinations(sorted(part), 2))
    g = Graph(14, es - MISSING)
    nested = {"children": [{"children": [{"children": [sorted(LOW_A), sorted(LOW_B)]}, sorted(MID_ATOM)]},
                           sorted(ROOT_ATOM)]}
    return g, SeparatorTree.from_nested(g, 5, nested)


def test_small_graph_is_degenerate():
    t = build(cycle_graph(4), 2)
    assert isinstance(t, SeparatorTree) and t.shape.is_degenerate()
    assert t.part_sets[0] == frozenset(range(4))


def test_two_k4_tree():
    g = two_k4()
    t = build(g, 2)
    assert len(t.shape.seps) == 1
    assert t.sep_sets[0] == frozenset({2, 3})
    assert sorted(t.atom_num.values()) == [4, 4]


def test_k6_is_found():
    res = build(complete_graph(6), 2)
    assert isinstance(res, Found) and res.witness == frozenset(range(6))


def test_build_rejects_bad_k():
    with pytest.raises(ValueError):
        build(path_graph(3), 0)


def test_from_nested_validation():
    g = path_graph(3)
    SeparatorTree.from_nested(g, 1, {"children": [[0, 1], [1, 2]]})
    with pytest.raises(TreeError):
        SeparatorTree.from_nested(g, 1, {"children": [[0, 1], [2]]})  # not covering an edge
    with pytest.raises(TreeError):
        SeparatorTree.from_nested(complete_graph(3), 1, {"children": [[0, 1], [1, 2]]})  # crossing edge
    with pytest.raises(TreeError):
        SeparatorTree.from_nested(complete_graph(5), 2, [0, 1, 2, 3, 4])  # atom too large


def test_descent_verdicts():
    g, t = descent_instance()
    assert {s: sorted(v) for s, v in t.sep_sets.items()} == {0: [0, 1, 2, 3, 4], 1: [2, 3, 7, 8, 9],
                                                             2: [0, 7, 8, 9, 11]}
    val = assign_valuation(t)
    verdicts = {x: classify_anti_edge(t, val, 0, 1, x) for x in t.anti_edges_within(t.sep_sets[0])}
    assert verdicts[(0, 1)].is_free
    assert verdicts[(0, 4)].is_free
    assert verdicts[(1, 2)].verdict == "atomic" and verdicts[(1, 2)].atom == 5
    assert verdicts[(2, 3)].is_free
    assert all(verify_tree(g, t, val).values())
    assert {p: atomic_defect(t, val, p) for p in t.shape.part_child} == {0: 0, 1: 1, 2: 0, 3: 0, 4: 0, 5: 2, 6: 4}


def test_classify_rejects_non_anti_edges():
    g, t = descent_instance()
    val = assign_valuation(t)
    with pytest.raises(GraphError):
        classify_anti_edge(t, val, 0, 1, (2, 4))
    with pytest.raises(GraphError):
        classify_anti_edge(t, val, 0, 1, (0, 5))
    with pytest.raises(TreeError):
        classify_anti_edge(t, val, 0, 3, (0, 1))


def test_atomic_defect_examples():
    g, t = descent_instance()
    val = assign_valuation(t)
    assert atomic_defect(t, val, t.shape.root) == 0
    k4 = build(complete_graph(4), 2)
    assert atomic_defect(k4, assign_valuation(k4), 0) == 0
    c4 = build(cycle_graph(4), 2)
    assert atomic_defect(c4, assign_valuation(c4), 0) == 2


def test_alpha_inequality_on_built_tree():
    g, t = descent_instance()
    val = assign_valuation(t)
    assert all(check_alpha_inequality(t, val, p) for p in t.shape.part_child)


def test_framework_values():
    t = build(two_k4(), 2)
    val = assign_valuation(t)
    f = associated_framework(t, val)
    assert f == {0: 0}
    assert framework_edge_number(t, val, f) == 11


def test_framework_value_with_tiny_vertices():
    # small side: normal atoms {0..5}, {0,1,6,7,8,9} and tiny atom {4,5,10}; k = 4
    parts = [set(range(6)), {0, 1, 6, 7, 8, 9}, {4, 5, 10}]
    es = set()
    for p in parts:
        es |= set(combinations(sorted(p), 2))
    g = Graph(11, es)
    nested = {"children": [{"children": [sorted(parts[0]), sorted(parts[1])]}, sorted(parts[2])]}
    t = SeparatorTree.from_nested(g, 4, nested)
    val = assign_valuation(t)
    assert t.profile.tiny == {4: 1}
    assert framework_edge_number(t, val, associated_framework(t, val)) >= len(g.edges)
    assert all(verify_tree(g, t, val).values())


def test_gen_g1_equality():
    g = gen_G(2, 1)
    t = build(g, 2)
    val = assign_valuation(t)
    e = framework_edge_number(t, val, associated_framework(t, val))
    assert e == 11 == BoundConstants(2).bound(6, 2)


# separator {1, 5} is a non-edge whose ends lie in different atoms of the small side
FREE_EDGES = [(0, 1), (0, 5), (0, 6), (0, 7), (1, 2), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5),
              (5, 6), (5, 7), (6, 7)]


def test_free_anti_edge_is_counted_and_required():
    g = Graph(8, FREE_EDGES)
    t = build(g, 2)
    val = assign_valuation(t)
    assert t.sep_sets[0] == frozenset({1, 5})
    assert count_free_anti_edges(t, val, 0, val.small_part(t.shape, 0)) == 1
    f = associated_framework(t, val)
    assert f[0] == 1
    assert all(verify_tree(g, t, val).values())
    with pytest.raises(ValueError):
        framework_edge_number(t, val, {**f, 0: Fraction(0)})


def test_baby_case_equality_at_atoms():
    g, t = descent_instance()
    val = assign_valuation(t)
    f = associated_framework(t, val)
    for a in t.shape.atoms:
        lhs = g.induced_edge_count(t.part_sets[a])
        assert lhs == framework_edge_number(t, val, f, a, check=False) - atomic_defect(t, val, a)
    assert all(check_baby_case(g, t, val).values())


def test_degenerate_baby_case():
    t = build(cycle_graph(4), 2)
    val = assign_valuation(t)
    assert all(check_baby_case(t.g, t, val).values())
    assert verify_tree(t.g, t, val)["root_defect_zero"]


def test_json_lists_small_branch_first():
    g, t = descent_instance()
    val = assign_valuation(t)
    d = json.loads(t.to_json(val))
    top = d["root"]["children"][0]
    assert top["vertices"] == [0, 1, 2, 3, 4]
    assert [c["id"] for c in top["children"]] == [6, 1]


def test_technical_data_of_normal_tree_is_empty():
    g, t = descent_instance()
    assert technical_data(t, assign_valuation(t)) == {}
    assert framework_value(t, assign_valuation(t), 0) == 0
