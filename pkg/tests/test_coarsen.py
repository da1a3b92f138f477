import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grammargen.certs import cert_hex, certificate
from grammargen.coarsen import (
    annotate_molecule_rings,
    annotate_rna,
    contract,
    join_sorted_labels,
    molecule_coarsener,
    rna_coarsener,
    rna_elements,
)
from grammargen.errors import GraphError
from grammargen.graphs import LabeledGraph, induced_subgraph, is_connected
from grammargen.rna import RnaStructure, pairs_from_dot_bracket, structure_to_graph

from conftest import random_graphs


def _mk(seq, db, **kw):
    return RnaStructure(seq, pairs_from_dot_bracket(db), **kw)


# -- contract ---------------------------------------------------------------------


def test_contract_path_groups():
    g = LabeledGraph([(0, "a", 1), (1, "a", 1), (2, "b", 2)], [(0, 1, "e"), (1, 2, "e")])
    res = contract(g, join_sorted_labels)
    assert [lbl for _, lbl, _ in res.coarse.nodes()] == ["aa", "b"]
    assert res.coarse.m == 1
    assert res.coarse_to_base == {0: frozenset({0, 1}), 1: frozenset({2})}


def test_contract_single_group():
    g = LabeledGraph([(0, "a", 5), (1, "b", 5)], [(0, 1, "e")])
    res = contract(g)
    assert res.coarse.n == 1 and res.coarse.m == 0


def test_contract_cycle_plus_chain():
    nodes = [(i, "c", 1) for i in range(6)]
    edges = [(i, (i + 1) % 6, "e") for i in range(6)]
    nodes += [(6, "x", 2), (7, "y", 3), (8, "z", 4)]
    edges += [(0, 6, "e"), (6, 7, "e"), (7, 8, "e")]
    res = contract(LabeledGraph(nodes, edges))
    assert res.coarse.n == 4 and res.coarse.m == 3
    degs = sorted(res.coarse.degree(v) for v in res.coarse.node_ids())
    assert degs == [1, 1, 2, 2]  # a path of 4


def test_contract_requires_cids():
    g = LabeledGraph([(0, "a"), (1, "b", 1)], [(0, 1, "e")])
    with pytest.raises(GraphError):
        contract(g)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 5))
def test_contract_partition_and_connectivity(seed, k):
    (g,) = random_graphs(1, seed, n_min=2, n_max=12)
    rng = random.Random(seed)
    cids = {v: rng.randrange(k) for v in g.node_ids()}
    res = contract(g.with_cids(cids))
    # partition: groups cover all base nodes exactly once
    union = set()
    for members in res.coarse_to_base.values():
        assert not (union & members)
        union |= members
    assert union == set(g.node_ids())
    assert res.coarse.n == len(set(cids.values()))
    assert all(res.base_to_coarse[v] in res.coarse_to_base for v in g.node_ids())
    if is_connected(g):
        assert is_connected(res.coarse)


# -- RNA annotator -----------------------------------------------------------------


def test_hairpin_elements_and_coarse_graph():
    s = _mk("GGGAAACCC", "(((...)))")
    els = rna_elements(s)
    assert els == [("S", [0, 1, 2, 6, 7, 8]), ("H", [3, 4, 5])]
    res = rna_coarsener(structure_to_graph(s))
    assert [lbl for _, lbl, _ in res.coarse.nodes()] == ["S", "H"]
    assert res.coarse.m == 1


def test_unstructured_sequence_is_dangling():
    s = _mk("AAAA", "....")
    res = rna_coarsener(structure_to_graph(s))
    assert res.coarse.n == 1 and res.coarse.nodes()[0][1] == "D"


def test_cloverleaf_multiloop_adjacent_to_closing_stems():
    db = "((..((...))..((...))..))"
    seq = list("A" * len(db))
    for i, j in pairs_from_dot_bracket(db):
        seq[i], seq[j] = "G", "C"
    s = RnaStructure("".join(seq), pairs_from_dot_bracket(db))
    res = rna_coarsener(structure_to_graph(s))
    labels = {v: lbl for v, lbl, _ in res.coarse.nodes()}
    m_nodes = [v for v, lbl in labels.items() if lbl == "M"]
    assert len(m_nodes) == 1
    m_neighbors = {labels[w] for w in res.coarse.neighbors(m_nodes[0])}
    assert m_neighbors == {"S"}
    assert len(res.coarse.neighbors(m_nodes[0])) == 3


def test_internal_loop_labeled_I():
    s = _mk("GGAAGGGAAACCCACC", "((..(((...))).))")
    kinds = [k for k, _ in rna_elements(s)]
    assert kinds == ["S", "I", "S", "H"]
    res = rna_coarsener(structure_to_graph(s))
    assert sorted(lbl for _, lbl, _ in res.coarse.nodes()) == ["H", "I", "S", "S"]


def test_rna_annotation_invariants():
    structures = [
        _mk("GGGAAACCC", "(((...)))"),
        _mk("AAGGGAAACCCAA", "..(((...))).."),
        _mk("GGAAGGGAAACCCACC", "((..(((...))).))"),
    ]
    for s in structures:
        g = annotate_rna(s)
        partner = s.partner_map()
        cids = {v: g.cid(v) for v in g.node_ids()}
        assert all(c is not None for c in cids.values())
        elements = rna_elements(s)
        for kind, positions in elements:
            group_cids = {cids[p] for p in positions}
            assert len(group_cids) == 1
            paired = [p in partner for p in positions]
            if kind == "S":
                assert all(paired)
            else:
                assert not any(paired)


# -- molecule annotator --------------------------------------------------------------


def _benzene_methyl():
    nodes = [(i, "C") for i in range(7)]
    edges = [(i, (i + 1) % 6, "1") for i in range(6)] + [(0, 6, "1")]
    return LabeledGraph(nodes, edges)


def test_benzene_methyl_contracts_to_ring_plus_carbon():
    g = _benzene_methyl()
    res = molecule_coarsener(g)
    assert res.coarse.n == 2 and res.coarse.m == 1
    labels = sorted(lbl for _, lbl, _ in res.coarse.nodes())
    ring_sub, _ = induced_subgraph(g, range(6))
    assert labels == sorted(["C", cert_hex(certificate(ring_sub))])


def test_acyclic_molecule_unchanged():
    g = LabeledGraph(
        [(0, "C"), (1, "O"), (2, "N")], [(0, 1, "1"), (1, 2, "2")]
    )
    res = molecule_coarsener(g)
    assert res.coarse.n == 3 and res.coarse.m == 2
    assert sorted(lbl for _, lbl, _ in res.coarse.nodes()) == ["C", "N", "O"]


def test_naphthalene_single_ring_node():
    edges = [(0, 1, "1"), (1, 2, "1"), (2, 3, "1"), (3, 4, "1"), (4, 5, "1"),
             (5, 0, "1"), (0, 6, "1"), (6, 7, "1"), (7, 8, "1"), (8, 9, "1"), (9, 5, "1")]
    g = LabeledGraph([(i, "C") for i in range(10)], edges)
    res = molecule_coarsener(g)
    assert res.coarse.n == 1 and res.coarse.m == 0


def test_ring_annotation_idempotent():
    g = _benzene_methyl()
    once = annotate_molecule_rings(g)
    twice = annotate_molecule_rings(once)
    assert [once.cid(v) for v in once.node_ids()] == [
        twice.cid(v) for v in twice.node_ids()
    ]
