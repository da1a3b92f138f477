import random

from hypothesis import given, settings
from hypothesis import strategies as st

from grammargen.certs import cert_hex, certificate, find_isomorphism
from grammargen.graphs import LabeledGraph

from conftest import permuted, random_graphs


def test_permutation_invariance_bulk():
    """1000 random node-id permutations across random graphs (<= 20 nodes)."""
    rng = random.Random(42)
    graphs = random_graphs(50, seed=7, n_min=2, n_max=20)
    checked = 0
    for g in graphs:
        ref = certificate(g)
        for _ in range(20):
            assert certificate(permuted(g, rng)) == ref
            checked += 1
    assert checked == 1000


def test_label_sensitivity():
    g1 = LabeledGraph([(0, "a"), (1, "b"), (2, "c")], [(0, 1, "x"), (1, 2, "x")])
    g2 = LabeledGraph([(0, "a"), (1, "b"), (2, "d")], [(0, 1, "x"), (1, 2, "x")])
    assert certificate(g1) != certificate(g2)


def test_edge_label_sensitivity():
    g1 = LabeledGraph([(0, "a"), (1, "a")], [(0, 1, "x")])
    g2 = LabeledGraph([(0, "a"), (1, "a")], [(0, 1, "y")])
    assert certificate(g1) != certificate(g2)


def test_mark_sensitivity():
    g = LabeledGraph([(0, "a"), (1, "a")], [(0, 1, "x")])
    assert certificate(g, {0: "R"}) != certificate(g)
    assert certificate(g, {0: "R"}) == certificate(g, {0: "R", 1: ""})


def test_six_cycle_vs_two_triangles():
    c6 = LabeledGraph([(i, "a") for i in range(6)], [(i, (i + 1) % 6, "e") for i in range(6)])
    tt = LabeledGraph(
        [(i, "a") for i in range(6)],
        [(0, 1, "e"), (1, 2, "e"), (0, 2, "e"), (3, 4, "e"), (4, 5, "e"), (3, 5, "e")],
    )
    assert certificate(c6) != certificate(tt)


def test_cert_hex_format():
    g = LabeledGraph([(0, "a")], [])
    h = cert_hex(certificate(g))
    assert len(h) == 16 and int(h, 16) >= 0


def test_collision_audit_small_graphs():
    """Equal certificates imply exact isomorphism on random labeled graphs
    of at most 8 nodes; zero failures expected at this scale."""
    graphs = random_graphs(300, seed=11, n_min=2, n_max=8)
    by_cert = {}
    for g in graphs:
        by_cert.setdefault(certificate(g), []).append(g)
    for group in by_cert.values():
        first = group[0]
        for other in group[1:]:
            assert find_isomorphism(first, other) is not None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_isomorphism_mapping_is_valid(seed):
    rng = random.Random(seed)
    (g,) = random_graphs(1, seed, n_min=2, n_max=10)
    h = permuted(g, rng)
    mapping = find_isomorphism(g, h)
    assert mapping is not None
    for a, b, label in g.edges():
        assert h.edge_label(mapping[a], mapping[b]) == label
    for v in g.node_ids():
        assert h.label(mapping[v]) == g.label(v)


def test_isomorphism_respects_marks():
    g = LabeledGraph([(0, "a"), (1, "a")], [(0, 1, "x")])
    h = LabeledGraph([(5, "a"), (9, "a")], [(5, 9, "x")])
    m = find_isomorphism(g, h, {0: "R"}, {9: "R"})
    assert m == {0: 9, 1: 5}
    assert find_isomorphism(g, h, {0: "R"}, {}) is None


def test_nonisomorphic_rejected():
    p3 = LabeledGraph([(0, "a"), (1, "a"), (2, "a")], [(0, 1, "e"), (1, 2, "e")])
    tri = LabeledGraph([(0, "a"), (1, "a"), (2, "a")], [(0, 1, "e"), (1, 2, "e"), (0, 2, "e")])
    assert find_isomorphism(p3, tri) is None
