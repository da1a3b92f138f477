import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grammargen.errors import GraphError
from grammargen.graphs import (
    LabeledGraph,
    graph_from_json,
    graph_to_json,
    induced_subgraph,
    is_connected,
    neighborhood,
)

from conftest import random_graphs


def test_construction_rejects_bad_edges():
    with pytest.raises(GraphError):
        LabeledGraph([(0, "a")], [(0, 1, "e")])
    with pytest.raises(GraphError):
        LabeledGraph([(0, "a"), (1, "b")], [(0, 0, "e")])
    with pytest.raises(GraphError):
        LabeledGraph([(0, "a"), (1, "b")], [(0, 1, "e"), (1, 0, "f")])
    with pytest.raises(GraphError):
        LabeledGraph([(0, "a"), (0, "b")], [])


def test_neighborhood_radius0_is_root(path5):
    assert neighborhood(path5, 2, 0) == {2}


def test_neighborhood_radius1_direct_neighbors(path5):
    assert neighborhood(path5, 2, 1) == {1, 2, 3}


def test_neighborhood_4cycle_radius2_covers_all():
    c4 = LabeledGraph([(i, "a") for i in range(4)], [(i, (i + 1) % 4, "e") for i in range(4)])
    for root in range(4):
        assert neighborhood(c4, root, 2) == {0, 1, 2, 3}


def test_neighborhood_unknown_root(path5):
    with pytest.raises(GraphError):
        neighborhood(path5, 99, 1)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.integers(0, 4))
def test_neighborhood_monotone(seed, radius):
    (g,) = random_graphs(1, seed)
    root = g.node_ids()[0]
    assert neighborhood(g, root, radius) <= neighborhood(g, root, radius + 1)


def test_induced_subgraph_keep_all_is_identity(path5):
    sub, to_base = induced_subgraph(path5, path5.node_ids())
    assert [(to_base[v], sub.label(v)) for v, _, _ in sub.nodes()] == [
        (v, path5.label(v)) for v in path5.node_ids()
    ]
    assert len(sub.edges()) == len(path5.edges())


def test_induced_subgraph_triangle_edge():
    tri = LabeledGraph([(0, "x"), (1, "y"), (2, "z")], [(0, 1, "e"), (1, 2, "e"), (0, 2, "e")])
    sub, _ = induced_subgraph(tri, {0, 1})
    assert sub.n == 2 and sub.edges() == [(0, 1, "e")]


def test_induced_subgraph_5cycle_consecutive_path():
    c5 = LabeledGraph([(i, "a") for i in range(5)], [(i, (i + 1) % 5, "e") for i in range(5)])
    sub, _ = induced_subgraph(c5, {1, 2, 3})
    # enumerating edges of the cycle restricted to {1,2,3}: (1,2) and (2,3)
    assert sub.m == 2
    degs = sorted(sub.degree(v) for v in sub.node_ids())
    assert degs == [1, 1, 2]


def test_induced_subgraph_unknown_node(path5):
    with pytest.raises(GraphError):
        induced_subgraph(path5, {0, 42})


def test_is_connected_cases(hairpin_graph):
    assert is_connected(LabeledGraph([(0, "a")], []))
    two_edges = LabeledGraph(
        [(0, "a"), (1, "a"), (2, "a"), (3, "a")], [(0, 1, "e"), (2, 3, "e")]
    )
    assert not is_connected(two_edges)
    assert is_connected(hairpin_graph)
    assert is_connected(LabeledGraph([], []))


def test_graph_json_roundtrip_bit_exact(hairpin_graph):
    s1 = graph_to_json(hairpin_graph)
    g2 = graph_from_json(s1)
    assert graph_to_json(g2) == s1
    assert g2 == hairpin_graph


def test_graph_json_cid_preserved():
    g = LabeledGraph([(0, "a", 1), (1, "b", None)], [(0, 1, "e")])
    d = json.loads(graph_to_json(g))
    assert d["nodes"][0]["cid"] == 1
    assert "cid" not in d["nodes"][1]
    assert graph_from_json(graph_to_json(g)) == g
