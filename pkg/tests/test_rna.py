import functools
import random

import pytest

from grammargen.errors import ParseError, StructureError, TransformError
from grammargen.rna import (
    RnaStructure,
    backbone_order,
    graph_to_structure,
    nussinov_fold,
    pairs_from_dot_bracket,
    parse_dot_bracket,
    structure_to_graph,
)
from grammargen.graphs import LabeledGraph

COMPLEMENT_WC = {frozenset("AU"), frozenset("CG")}
COMPLEMENT_WOBBLE = COMPLEMENT_WC | {frozenset("GU")}


def brute_max_pairs(seq, minloop=3, wobble=True):
    """Oracle: exhaustive maximum over all non-crossing complementary
    matchings, enumerated by deciding the fate of the leftmost position."""
    allowed = COMPLEMENT_WOBBLE if wobble else COMPLEMENT_WC

    @functools.lru_cache(maxsize=None)
    def go(positions):
        if len(positions) < 2:
            return 0
        i, rest = positions[0], positions[1:]
        best = go(rest)
        for k in rest:
            if k - i > minloop and frozenset((seq[i], seq[k])) in allowed:
                inside = tuple(x for x in rest if x < k)
                outside = tuple(x for x in rest if x > k)
                best = max(best, 1 + go(inside) + go(outside))
        return best

    return go(tuple(range(len(seq))))


# -- structure invariants -------------------------------------------------------


def test_structure_rejects_crossing():
    with pytest.raises(StructureError):
        RnaStructure("GGGGAAAACCCC", frozenset({(0, 8), (4, 11)}), minloop=3)


def test_structure_rejects_double_pairing():
    with pytest.raises(StructureError):
        RnaStructure("GAAAACC", frozenset({(0, 5), (0, 6)}), minloop=3)


def test_structure_rejects_noncomplementary():
    with pytest.raises(StructureError):
        RnaStructure("AAAAA", frozenset({(0, 4)}))


def test_structure_wobble_configurable():
    RnaStructure("GAAAU", frozenset({(0, 4)}))  # G-U allowed by default
    with pytest.raises(StructureError):
        RnaStructure("GAAAU", frozenset({(0, 4)}), wobble=False)


def test_structure_minloop():
    with pytest.raises(StructureError):
        RnaStructure("GAAC", frozenset({(0, 3)}), minloop=3)


# -- dot-bracket parsing ---------------------------------------------------------


def test_parse_hairpin_record():
    records = parse_dot_bracket(">h\nGGGAAACCC\n(((...)))\n")
    assert len(records) == 1
    name, s = records[0]
    assert name == "h"
    assert s.pairs == frozenset({(0, 8), (1, 7), (2, 6)})


def test_parse_unbalanced_open():
    with pytest.raises(ParseError):
        parse_dot_bracket(">x\nAA\n((\n")


def test_parse_unbalanced_close():
    with pytest.raises(ParseError):
        pairs_from_dot_bracket(".))")


def test_parse_minloop_violation_rejected():
    with pytest.raises(ParseError) as exc:
        parse_dot_bracket(">x\nGCGC\n(..)\n")
    assert "minloop" in str(exc.value)


def test_parse_length_mismatch():
    with pytest.raises(ParseError) as exc:
        parse_dot_bracket(">x\nGGGAAACCC\n(((..)))\n")
    assert exc.value.line == 3


def test_parse_invalid_nucleotide():
    with pytest.raises(ParseError):
        parse_dot_bracket(">x\nGGXAAACCC\n.........\n")


# -- folding ---------------------------------------------------------------------


def test_fold_gcgc_no_pairs():
    assert nussinov_fold("GCGC").pairs == frozenset()


def test_fold_hairpin_exact():
    assert nussinov_fold("GGGAAACCC").pairs == frozenset({(0, 8), (1, 7), (2, 6)})


def test_fold_aaaa_no_pairs():
    assert nussinov_fold("AAAA").pairs == frozenset()


def test_fold_invalid_character():
    with pytest.raises(StructureError):
        nussinov_fold("GGXCC")


def test_fold_deterministic():
    seq = "GGCGAAAGCUUCGAAAAGC"
    assert nussinov_fold(seq).pairs == nussinov_fold(seq).pairs


def test_fold_matches_bruteforce_oracle():
    rng = random.Random(23)
    for _ in range(60):
        n = rng.randint(1, 12)
        seq = "".join(rng.choice("ACGU") for _ in range(n))
        for wobble in (True, False):
            s = nussinov_fold(seq, wobble=wobble)
            assert len(s.pairs) == brute_max_pairs(seq, wobble=wobble), seq


# -- graph conversion -------------------------------------------------------------


def test_structure_graph_roundtrip():
    s = RnaStructure("GGGAAACCC", frozenset({(0, 8), (1, 7), (2, 6)}))
    g = structure_to_graph(s)
    assert g.n == 9 and g.m == 8 + 3
    back, order = graph_to_structure(g)
    assert back.sequence == s.sequence and back.pairs == s.pairs
    assert order == list(range(9))


def test_backbone_order_single_node():
    g = LabeledGraph([(0, "A")], [])
    assert backbone_order(g) == [0]


def test_backbone_rejects_branching():
    g = LabeledGraph(
        [(0, "A"), (1, "A"), (2, "A"), (3, "A")],
        [(0, 1, "b"), (1, 2, "b"), (1, 3, "b")],
    )
    with pytest.raises(TransformError):
        backbone_order(g)


def test_backbone_rejects_cycle():
    g = LabeledGraph(
        [(0, "A"), (1, "A"), (2, "A"), (3, "A"), (4, "A")],
        [(0, 1, "b"), (1, 2, "b"), (2, 3, "b"), (3, 4, "b"), (4, 0, "b")],
    )
    with pytest.raises(TransformError):
        backbone_order(g)
